import { ApiError } from "./api";
import type { KeyEvent, SessionSnapshot, UiSessionView } from "./types";
import { viewFromSnapshot } from "./types";

export type ViewListener = (view: UiSessionView) => void;

/** The part of the service API the controller needs. */
export interface PredictionApi {
  createSession(config: string): Promise<SessionSnapshot>;
  getSession(id: string): Promise<SessionSnapshot>;
  sendEvent(id: string, event: KeyEvent): Promise<SessionSnapshot>;
  deleteSession(id: string): Promise<void>;
}

/**
 * Client-side session state.
 *
 * One request is in flight at a time.  Char and backspace events are
 * queued while waiting; select clicks are rejected instead, because a
 * rank only makes sense against the list currently on screen.  Char
 * events echo into the prefix immediately and the echo is reconciled
 * with (or rolled back to) the server's snapshot.
 */
export class SessionController {
  private snapshot: SessionSnapshot | null = null;
  private optimisticPrefix: string | null = null;
  private queue: KeyEvent[] = [];
  private inFlight = false;
  private connected = true;

  constructor(
    private readonly api: PredictionApi,
    private readonly onChange: ViewListener = () => {},
  ) {}

  get sessionId(): string {
    if (!this.snapshot) throw new Error("session not started");
    return this.snapshot.id;
  }

  get activeConfig(): string {
    return this.snapshot?.config ?? "";
  }

  view(): UiSessionView {
    if (!this.snapshot) throw new Error("session not started");
    const view = viewFromSnapshot(this.snapshot, {
      connected: this.connected,
      busy: this.inFlight,
    });
    if (this.optimisticPrefix !== null) {
      const base = this.snapshot.prefix
        ? this.snapshot.text
            .slice(0, this.snapshot.text.length - this.snapshot.prefix.length)
            .trimEnd()
        : this.snapshot.text;
      view.currentPrefix = this.optimisticPrefix;
      view.composedText = this.optimisticPrefix
        ? base
          ? `${base} ${this.optimisticPrefix}`
          : this.optimisticPrefix
        : base;
    }
    return view;
  }

  async start(config: string): Promise<UiSessionView> {
    this.snapshot = await this.api.createSession(config);
    this.connected = true;
    this.optimisticPrefix = null;
    this.queue = [];
    this.emit();
    return this.view();
  }

  /**
   * Route a key to the server.  Returns false when the event is
   * rejected (no session, disconnected, or a select while busy).
   */
  dispatchKey(event: KeyEvent): boolean {
    if (!this.snapshot || !this.connected) return false;
    if (event.type === "select" && (this.inFlight || this.queue.length > 0)) {
      return false; // double-click protection: the list is about to change
    }
    if (event.type === "char" && isEchoChar(event.value)) {
      const base = this.optimisticPrefix ?? this.snapshot.prefix;
      this.optimisticPrefix = base + event.value.toLowerCase();
    } else if (event.type === "backspace") {
      const base = this.optimisticPrefix ?? this.snapshot.prefix;
      this.optimisticPrefix = base.slice(0, -1);
    }
    this.queue.push(event);
    this.emit();
    void this.pump();
    return true;
  }

  private async pump(): Promise<void> {
    if (this.inFlight || !this.snapshot) return;
    const event = this.queue.shift();
    if (!event) return;
    this.inFlight = true;
    this.emit();
    try {
      this.snapshot = await this.api.sendEvent(this.snapshot.id, event);
      if (this.queue.length === 0) this.optimisticPrefix = null;
    } catch (err) {
      // roll back the optimistic echo and drop whatever was queued
      this.optimisticPrefix = null;
      this.queue = [];
      if (!(err instanceof ApiError)) {
        this.connected = false; // network failure, not a server rejection
      }
    } finally {
      this.inFlight = false;
      this.emit();
    }
    if (this.queue.length > 0) void this.pump();
  }

  /** Wait until every queued event has been acknowledged. */
  async settle(): Promise<void> {
    while (this.inFlight || this.queue.length > 0) {
      await new Promise((resolve) => setTimeout(resolve, 1));
    }
  }

  async reconnect(): Promise<void> {
    if (!this.snapshot) return;
    this.snapshot = await this.api.getSession(this.snapshot.id);
    this.connected = true;
    this.optimisticPrefix = null;
    this.emit();
  }

  /**
   * Start a session under another preset, replaying the committed words
   * so the new predictor sees the same context.  The replay types each
   * word out (char events plus a space); a half-typed prefix is
   * dropped, committing nothing.  Switching to the active preset is a
   * no-op.
   */
  async switchConfig(preset: string): Promise<UiSessionView> {
    if (!this.snapshot) throw new Error("session not started");
    if (preset === this.snapshot.config) return this.view();
    await this.settle();
    const words = this.snapshot.committed_words;
    const old = this.snapshot.id;
    this.snapshot = await this.api.createSession(preset);
    for (const event of replayEvents(words)) {
      this.snapshot = await this.api.sendEvent(this.snapshot.id, event);
    }
    this.optimisticPrefix = null;
    this.queue = [];
    void this.api.deleteSession(old).catch(() => {});
    this.emit();
    return this.view();
  }

  private emit(): void {
    if (this.snapshot) this.onChange(this.view());
  }
}

export function isEchoChar(c: string): boolean {
  return c.length === 1 && c !== " " && /[\p{L}\p{N}'’-]/u.test(c);
}

/** Char events that retype the given words, one space after each. */
export function replayEvents(words: readonly string[]): KeyEvent[] {
  const out: KeyEvent[] = [];
  for (const word of words) {
    for (const c of word) out.push({ type: "char", value: c });
    out.push({ type: "char", value: " " });
  }
  return out;
}
