import { ApiClient } from "./api";
import { renderKeyboard, type Layout } from "./keyboard";
import { SessionController } from "./session";
import type { UiSessionView } from "./types";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "http://127.0.0.1:8080";
const layout = (params.get("layout") as Layout) ?? "azerty";
const initialConfig = params.get("config") ?? "cwgi";

const api = new ApiClient(baseUrl);
const mount = document.getElementById("app");
if (!mount) throw new Error("missing #app mount point");

let configs: string[] = [];

function paint(view: UiSessionView): void {
  const node = renderKeyboard(
    view,
    {
      onKey: (event) => controller.dispatchKey(event),
      onReconnect: () => void controller.reconnect(),
      onConfigSwitch: (preset) => void controller.switchConfig(preset),
    },
    { layout, configs },
  );
  mount!.replaceChildren(node);
}

const controller = new SessionController(api, paint);

async function boot(): Promise<void> {
  configs = await api.configs();
  await controller.start(
    configs.includes(initialConfig) ? initialConfig : configs[0]!,
  );
  // physical keyboard pass-through
  document.addEventListener("keydown", (ev) => {
    if (ev.key === "Backspace") {
      controller.dispatchKey({ type: "backspace" });
      ev.preventDefault();
    } else if (ev.key.length === 1) {
      controller.dispatchKey({ type: "char", value: ev.key });
      ev.preventDefault();
    } else if (/^[1-9]$/.test(ev.key) && ev.altKey) {
      controller.dispatchKey({ type: "select", value: Number(ev.key) });
      ev.preventDefault();
    }
  });
}

boot().catch((err) => {
  mount!.textContent = `failed to reach the prediction service at ${baseUrl}: ${err}`;
});
