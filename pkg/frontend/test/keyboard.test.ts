// @vitest-environment jsdom
import { describe, expect, it, vi } from "vitest";

import { renderKeyboard } from "../src/keyboard";
import type { KeyEvent, UiSessionView } from "../src/types";

function view(overrides: Partial<UiSessionView> = {}): UiSessionView {
  return {
    sessionId: "s1",
    composedText: "",
    currentPrefix: "",
    predictions: [],
    liveKsr: 0,
    counters: { kp: 0, ka: 0, ksr: 0 },
    activeConfig: "cwgi",
    connected: true,
    busy: false,
    ...overrides,
  };
}

const noop = { onKey: () => {}, onReconnect: () => {}, onConfigSwitch: () => {} };

describe("renderKeyboard", () => {
  it("renders an empty session with an empty text area", () => {
    const root = renderKeyboard(view(), noop);
    expect(root.querySelector(".wp-committed")!.textContent).toBe("");
    expect(root.querySelectorAll(".wp-prediction")).toHaveLength(0);
    expect(root.querySelectorAll(".wp-key").length).toBeGreaterThan(20);
  });

  it("renders one button per prediction with 4-decimal probabilities", () => {
    const preds = [
      { word: "sail", p: 0.12345678, rank: 1 },
      { word: "sea", p: 0.01, rank: 2 },
      { word: "storm", p: 0.0007, rank: 3 },
    ];
    const root = renderKeyboard(view({ predictions: preds }), noop);
    const buttons = root.querySelectorAll(".wp-prediction");
    expect(buttons).toHaveLength(3);
    expect(buttons[0]!.querySelector(".wp-word")!.textContent).toBe("sail");
    expect(buttons[0]!.querySelector(".wp-prob")!.textContent).toBe("0.1235");
    expect(buttons[2]!.querySelector(".wp-prob")!.textContent).toBe("0.0007");
  });

  it("clicking a prediction dispatches its 1-based rank", () => {
    const onKey = vi.fn<(e: KeyEvent) => void>();
    const preds = [
      { word: "sail", p: 0.5, rank: 1 },
      { word: "sea", p: 0.25, rank: 2 },
    ];
    const root = renderKeyboard(view({ predictions: preds }), { ...noop, onKey });
    (root.querySelectorAll(".wp-prediction")[1] as HTMLButtonElement).click();
    expect(onKey).toHaveBeenCalledWith({ type: "select", value: 2 });
  });

  it("letter keys dispatch char events", () => {
    const onKey = vi.fn<(e: KeyEvent) => void>();
    const root = renderKeyboard(view(), { ...noop, onKey }, { layout: "qwerty" });
    const q = [...root.querySelectorAll(".wp-key")].find((k) => k.textContent === "q");
    (q as HTMLButtonElement).click();
    expect(onKey).toHaveBeenCalledWith({ type: "char", value: "q" });
  });

  it("space and backspace dispatch their events", () => {
    const onKey = vi.fn<(e: KeyEvent) => void>();
    const root = renderKeyboard(view(), { ...noop, onKey });
    (root.querySelector(".wp-space") as HTMLButtonElement).click();
    (root.querySelector(".wp-backspace") as HTMLButtonElement).click();
    expect(onKey).toHaveBeenNthCalledWith(1, { type: "char", value: " " });
    expect(onKey).toHaveBeenNthCalledWith(2, { type: "backspace" });
  });

  it("punctuation keys disable while a word is being typed", () => {
    const typing = renderKeyboard(view({ currentPrefix: "sa" }), noop);
    for (const key of typing.querySelectorAll(".wp-punct")) {
      expect((key as HTMLButtonElement).disabled).toBe(true);
    }
    const idle = renderKeyboard(view(), noop);
    for (const key of idle.querySelectorAll(".wp-punct")) {
      expect((key as HTMLButtonElement).disabled).toBe(false);
    }
  });

  it("disconnected sessions disable keys behind a reconnect banner", () => {
    const onReconnect = vi.fn();
    const root = renderKeyboard(view({ connected: false }), {
      ...noop,
      onReconnect,
    });
    expect(root.querySelector(".wp-banner")).not.toBeNull();
    for (const key of root.querySelectorAll(".wp-key")) {
      expect((key as HTMLButtonElement).disabled).toBe(true);
    }
    (root.querySelector(".wp-reconnect") as HTMLButtonElement).click();
    expect(onReconnect).toHaveBeenCalledOnce();
  });

  it("shows the live meter straight from the server counters", () => {
    const root = renderKeyboard(
      view({ liveKsr: 42.1234, counters: { kp: 10, ka: 17, ksr: 42.1234 } }),
      noop,
    );
    expect(root.querySelector(".wp-ksr")!.textContent).toBe("42.12%");
    expect(root.querySelector(".wp-counters")!.textContent).toBe("kp 10 / ka 17");
  });

  it("config selector marks the active preset and dispatches switches", () => {
    const onConfigSwitch = vi.fn();
    const root = renderKeyboard(
      view({ activeConfig: "gi" }),
      { ...noop, onConfigSwitch },
      { configs: ["baseline", "gi", "cwgi"] },
    );
    const select = root.querySelector(".wp-config-select") as HTMLSelectElement;
    expect(select.value).toBe("gi");
    select.value = "cwgi";
    select.dispatchEvent(new window.Event("change"));
    expect(onConfigSwitch).toHaveBeenCalledWith("cwgi");
  });

  it("azerty layout puts a on the first row, qwerty does not", () => {
    const az = renderKeyboard(view(), noop, { layout: "azerty" });
    const qw = renderKeyboard(view(), noop, { layout: "qwerty" });
    const firstRow = (root: HTMLElement) =>
      [...root.querySelectorAll(".wp-row")[0]!.querySelectorAll(".wp-key")]
        .map((k) => k.textContent)
        .join("");
    expect(firstRow(az)).toBe("azertyuiop");
    expect(firstRow(qw)).toBe("qwertyuiop");
  });
});
