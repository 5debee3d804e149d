// Browser entry point: wires the controller to the page.

import { ApiClient, fetchTransport } from "./api.js";
import { AppController } from "./app.js";
import { renderChatHtml, renderHypothesesHtml, renderMapSvg } from "./render.js";

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

const EXPORT_EXTENSIONS = { json: "json", dot: "dot", markdown: "md" } as const;

function main(): void {
  const chatPane = element<HTMLDivElement>("chat");
  const mapPane = element<HTMLDivElement>("map-pane");
  const hypothesesPane = element<HTMLDivElement>("hypotheses-pane");
  const input = element<HTMLInputElement>("utterance");
  const sendButton = element<HTMLButtonElement>("send");

  const controller = new AppController(new ApiClient(fetchTransport()), {
    get: (key) => window.localStorage.getItem(key),
    set: (key, value) => window.localStorage.setItem(key, value),
    remove: (key) => window.localStorage.removeItem(key),
  });

  controller.onChange(() => {
    const vm = controller.vm;
    chatPane.innerHTML = renderChatHtml(vm.chat);
    chatPane.scrollTop = chatPane.scrollHeight;
    mapPane.innerHTML = renderMapSvg(vm.map);
    hypothesesPane.innerHTML = renderHypothesesHtml(vm.hypotheses);
    input.disabled = vm.pending || vm.done || !vm.connected;
    sendButton.disabled = input.disabled || input.value.trim().length === 0;
  });

  input.addEventListener("input", () => {
    sendButton.disabled = input.disabled || input.value.trim().length === 0;
  });

  const submit = () => {
    const text = input.value;
    if (!controller.canSend(text)) return;
    input.value = "";
    void controller.send(text);
  };
  sendButton.addEventListener("click", submit);
  input.addEventListener("keydown", (event) => {
    if (event.key === "Enter") submit();
  });

  for (const format of ["json", "dot", "markdown"] as const) {
    element<HTMLButtonElement>(`export-${format}`).addEventListener("click", async () => {
      const text = await controller.downloadExport(format);
      if (text === null) return;
      const payload = format === "json" ? text : String(text);
      const blob = new Blob([payload], { type: "text/plain" });
      const link = document.createElement("a");
      link.href = URL.createObjectURL(blob);
      link.download = `map.${EXPORT_EXTENSIONS[format]}`;
      link.click();
      URL.revokeObjectURL(link.href);
    });
  }

  void controller.start();
}

document.addEventListener("DOMContentLoaded", main);
