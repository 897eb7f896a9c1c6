"""Conversational data-science engine.

Turns a chat about a CSV file into a typed machine-learning task
expression, runs it against a training backend, and reports the results.
Every language-model call goes through a single gateway that can be
driven by a scripted provider for fully offline operation.
"""

__version__ = "0.1.0"
