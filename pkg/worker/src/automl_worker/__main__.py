"""Launch the worker: ``python3 -m automl_worker``."""

from __future__ import annotations

import os

import uvicorn


def main() -> None:
    uvicorn.run(
        "automl_worker:app",
        host=os.environ.get("AUTOML_WORKER_HOST", "127.0.0.1"),
        port=int(os.environ.get("AUTOML_WORKER_PORT", "8731")),
    )


if __name__ == "__main__":
    main()
