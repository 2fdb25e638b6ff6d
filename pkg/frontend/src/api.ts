import type { KeyEvent, SessionSnapshot } from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

/** Thin typed client for the prediction service endpoints. */
export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = await resp.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(resp.status, detail);
    }
    if (resp.status === 204) return undefined as T;
    return (await resp.json()) as T;
  }

  async configs(): Promise<string[]> {
    const data = await this.request<{ v: number; configs: string[] }>("/configs");
    return data.configs;
  }

  createSession(config: string): Promise<SessionSnapshot> {
    return this.request("/sessions", {
      method: "POST",
      body: JSON.stringify({ v: 1, config }),
    });
  }

  getSession(id: string): Promise<SessionSnapshot> {
    return this.request(`/sessions/${id}`);
  }

  sendEvent(id: string, event: KeyEvent): Promise<SessionSnapshot> {
    return this.request(`/sessions/${id}/events`, {
      method: "POST",
      body: JSON.stringify({ v: 1, ...event }),
    });
  }

  deleteSession(id: string): Promise<void> {
    return this.request(`/sessions/${id}`, { method: "DELETE" });
  }
}
