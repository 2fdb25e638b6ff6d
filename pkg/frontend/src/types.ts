export interface Prediction {
  word: string;
  p: number;
  rank: number;
}

export interface Counters {
  kp: number;
  ka: number;
  ksr: number;
}

export interface SessionSnapshot {
  v: number;
  id: string;
  config: string;
  text: string;
  committed_words: string[];
  prefix: string;
  predictions: Prediction[];
  counters: Counters;
}

export type KeyEvent =
  | { type: "char"; value: string }
  | { type: "select"; value: number }
  | { type: "backspace" };

/** Everything the keyboard needs to paint one frame. */
export interface UiSessionView {
  sessionId: string;
  composedText: string;
  currentPrefix: string;
  predictions: Prediction[];
  /** Mirrors the server counters exactly; never recomputed client-side. */
  liveKsr: number;
  counters: Counters;
  activeConfig: string;
  connected: boolean;
  busy: boolean;
}

export function viewFromSnapshot(
  snap: SessionSnapshot,
  opts: { connected?: boolean; busy?: boolean } = {},
): UiSessionView {
  return {
    sessionId: snap.id,
    composedText: snap.text,
    currentPrefix: snap.prefix,
    predictions: snap.predictions,
    liveKsr: snap.counters.ksr,
    counters: snap.counters,
    activeConfig: snap.config,
    connected: opts.connected ?? true,
    busy: opts.busy ?? false,
  };
}

export function formatProbability(p: number): string {
  return p.toFixed(4);
}

export function formatKsr(ksr: number): string {
  return `${ksr.toFixed(2)}%`;
}
