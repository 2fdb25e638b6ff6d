import type { KeyEvent, UiSessionView } from "./types";
import { formatKsr, formatProbability } from "./types";

export type Layout = "azerty" | "qwerty";

const LAYOUT_ROWS: Record<Layout, string[]> = {
  azerty: ["azertyuiop", "qsdfghjklm", "wxcvbn'-"],
  qwerty: ["qwertyuiop", "asdfghjkl'", "zxcvbnm-"],
};

const PUNCTUATION_KEYS = [".", ",", "!", "?"];

export interface KeyboardCallbacks {
  onKey: (event: KeyEvent) => void;
  onReconnect: () => void;
  onConfigSwitch: (preset: string) => void;
}

export interface KeyboardOptions {
  layout?: Layout;
  configs?: string[];
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/**
 * Pure render of one session frame: composed text, the prediction
 * buttons (word plus probability to four decimals), letter keys, space
 * and backspace, a live keystroke-savings meter fed by the server
 * counters, and the preset selector.  Disconnected sessions render with
 * every key disabled behind a reconnect banner.
 */
export function renderKeyboard(
  view: UiSessionView,
  callbacks: KeyboardCallbacks,
  options: KeyboardOptions = {},
  doc: Document = document,
): HTMLElement {
  const layout = options.layout ?? "azerty";
  const root = el(doc, "div", "wp-keyboard");
  const disabled = !view.connected || view.busy;

  if (!view.connected) {
    const banner = el(doc, "div", "wp-banner", "connection lost — ");
    const retry = el(doc, "button", "wp-reconnect", "reconnect");
    retry.addEventListener("click", () => callbacks.onReconnect());
    banner.appendChild(retry);
    root.appendChild(banner);
  }

  const textArea = el(doc, "div", "wp-text");
  const committed = el(doc, "span", "wp-committed", view.composedText);
  textArea.appendChild(committed);
  const caret = el(doc, "span", "wp-caret", "_");
  textArea.appendChild(caret);
  root.appendChild(textArea);

  const meter = el(doc, "div", "wp-meter");
  meter.appendChild(el(doc, "span", "wp-ksr", formatKsr(view.liveKsr)));
  meter.appendChild(
    el(
      doc,
      "span",
      "wp-counters",
      `kp ${view.counters.kp} / ka ${view.counters.ka}`,
    ),
  );
  root.appendChild(meter);

  const predictions = el(doc, "div", "wp-predictions");
  for (const pred of view.predictions) {
    const button = el(doc, "button", "wp-prediction");
    button.appendChild(el(doc, "span", "wp-word", pred.word));
    button.appendChild(el(doc, "span", "wp-prob", formatProbability(pred.p)));
    button.disabled = disabled;
    button.dataset.rank = String(pred.rank);
    button.addEventListener("click", () =>
      callbacks.onKey({ type: "select", value: pred.rank }),
    );
    predictions.appendChild(button);
  }
  root.appendChild(predictions);

  const keys = el(doc, "div", "wp-keys");
  for (const row of LAYOUT_ROWS[layout]) {
    const rowEl = el(doc, "div", "wp-row");
    for (const c of row) {
      const key = el(doc, "button", "wp-key", c);
      key.disabled = !view.connected;
      key.addEventListener("click", () =>
        callbacks.onKey({ type: "char", value: c }),
      );
      rowEl.appendChild(key);
    }
    keys.appendChild(rowEl);
  }
  const controls = el(doc, "div", "wp-row wp-controls");
  const backspace = el(doc, "button", "wp-key wp-backspace", "⌫");
  backspace.addEventListener("click", () => callbacks.onKey({ type: "backspace" }));
  backspace.disabled = !view.connected;
  controls.appendChild(backspace);
  const space = el(doc, "button", "wp-key wp-space", "space");
  space.addEventListener("click", () =>
    callbacks.onKey({ type: "char", value: " " }),
  );
  space.disabled = !view.connected;
  controls.appendChild(space);
  for (const c of PUNCTUATION_KEYS) {
    const key = el(doc, "button", "wp-key wp-punct", c);
    // punctuation is its own token: finish the word first
    key.disabled = !view.connected || view.currentPrefix.length > 0;
    key.addEventListener("click", () => callbacks.onKey({ type: "char", value: c }));
    controls.appendChild(key);
  }
  keys.appendChild(controls);
  root.appendChild(keys);

  const configs = options.configs ?? [];
  if (configs.length > 0) {
    const picker = el(doc, "div", "wp-configs");
    picker.appendChild(el(doc, "label", "wp-config-label", "method"));
    const select = doc.createElement("select");
    select.className = "wp-config-select";
    for (const name of configs) {
      const opt = doc.createElement("option");
      opt.value = name;
      opt.textContent = name;
      opt.selected = name === view.activeConfig;
      select.appendChild(opt);
    }
    select.disabled = !view.connected;
    select.addEventListener("change", () => callbacks.onConfigSwitch(select.value));
    picker.appendChild(select);
    root.appendChild(picker);
  }

  return root;
}
