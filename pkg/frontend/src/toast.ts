/** Inline toast stack; errors surface here instead of blocking the chat. */

export interface ToastOptions {
  retryLabel?: string;
  onRetry?: () => void;
  ttlMs?: number;
}

export function createToastStack(): { el: HTMLElement; show(message: string, opts?: ToastOptions): void } {
  const el = document.createElement("div");
  el.className = "toast-stack";

  function show(message: string, opts: ToastOptions = {}): void {
    const toast = document.createElement("div");
    toast.className = "toast";

    const text = document.createElement("span");
    text.textContent = message;
    toast.appendChild(text);

    if (opts.onRetry) {
      const retry = document.createElement("button");
      retry.type = "button";
      retry.className = "toast-retry";
      retry.textContent = opts.retryLabel ?? "Retry";
      retry.addEventListener("click", () => {
        toast.remove();
        opts.onRetry?.();
      });
      toast.appendChild(retry);
    }

    const close = document.createElement("button");
    close.type = "button";
    close.className = "toast-close";
    close.textContent = "×";
    close.addEventListener("click", () => toast.remove());
    toast.appendChild(close);

    el.appendChild(toast);
    const ttl = opts.ttlMs ?? 8000;
    if (ttl > 0) {
      setTimeout(() => toast.remove(), ttl);
    }
  }

  return { el, show };
}
