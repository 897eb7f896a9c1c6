/** Message list, input box, and the dialogue-state badge. */

export interface ChatView {
  el: HTMLElement;
  addMessage(role: "user" | "assistant", text: string): void;
  setState(state: string): void;
  setBusy(busy: boolean): void;
}

export function createChatView(onSend: (text: string) => void): ChatView {
  const el = document.createElement("section");
  el.className = "chat-view";

  const header = document.createElement("header");
  const title = document.createElement("h2");
  title.textContent = "Conversation";
  const badge = document.createElement("span");
  badge.className = "state-badge";
  badge.textContent = "no session";
  header.append(title, badge);

  const list = document.createElement("ol");
  list.className = "chat-messages";

  const form = document.createElement("form");
  form.className = "chat-input";
  const input = document.createElement("input");
  input.type = "text";
  input.placeholder = "Describe the task, answer a question, or just chat";
  input.setAttribute("aria-label", "message");
  const send = document.createElement("button");
  send.type = "submit";
  send.textContent = "Send";
  form.append(input, send);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value.trim();
    if (!text || input.disabled) {
      return;
    }
    input.value = "";
    onSend(text);
  });

  el.append(header, list, form);

  return {
    el,
    addMessage(role, text) {
      const item = document.createElement("li");
      item.className = `chat-message chat-${role}`;
      item.textContent = text;
      list.appendChild(item);
      item.scrollIntoView?.({ block: "end" });
    },
    setState(state) {
      badge.textContent = state;
      badge.dataset.state = state;
    },
    setBusy(busy) {
      input.disabled = busy;
      send.disabled = busy;
    },
  };
}
