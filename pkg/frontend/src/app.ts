// Controller behind the page: owns the view model, talks to the API, and
// never invents state of its own. The map pane always shows the map from
// the most recent server response, and at most one message request is in
// flight at a time.

import { ApiClient, ApiError } from "./api.js";
import type { ChatMessage, HypothesisPayload, MapPayload } from "./types.js";

export interface KeyValueStore {
  get(key: string): string | null;
  set(key: string, value: string): void;
  remove(key: string): void;
}

export interface ViewModel {
  sessionId: string | null;
  chat: ChatMessage[];
  map: MapPayload | null;
  hypotheses: HypothesisPayload[] | null;
  pending: boolean;
  done: boolean;
  connected: boolean;
}

const SESSION_KEY = "mentorbot.session";

export class AppController {
  readonly vm: ViewModel = {
    sessionId: null,
    chat: [],
    map: null,
    hypotheses: null,
    pending: false,
    done: false,
    connected: true,
  };

  private listeners: Array<() => void> = [];

  constructor(private readonly api: ApiClient, private readonly store?: KeyValueStore) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  private say(speaker: ChatMessage["speaker"], text: string): void {
    this.vm.chat.push({ speaker, text });
  }

  /** Resume the stored session if one exists, otherwise start fresh. */
  async start(): Promise<void> {
    const stored = this.store?.get(SESSION_KEY);
    if (stored && (await this.resume(stored))) return;
    try {
      const created = await this.api.createSession();
      this.vm.sessionId = created.session_id;
      this.store?.set(SESSION_KEY, created.session_id);
      for (const line of created.greeting) this.say("bot", line);
      this.vm.connected = true;
    } catch {
      this.vm.connected = false;
      this.say("notice", "Cannot reach the mentor service. Check that it is running and reload.");
    }
    this.notify();
  }

  private async resume(sessionId: string): Promise<boolean> {
    try {
      const snapshot = await this.api.getSession(sessionId);
      this.vm.sessionId = snapshot.session_id;
      this.vm.done = snapshot.done;
      for (const entry of snapshot.transcript) this.say(entry.speaker, entry.text);
      this.vm.map = await this.api.getMap(sessionId);
      if (snapshot.done) {
        this.vm.hypotheses = await this.api.getHypotheses(sessionId);
      }
      this.vm.connected = true;
      this.notify();
      return true;
    } catch {
      this.store?.remove(SESSION_KEY);
      return false;
    }
  }

  canSend(text: string): boolean {
    return Boolean(this.vm.sessionId) && !this.vm.pending && !this.vm.done &&
      text.trim().length > 0;
  }

  /** Returns true when the message was actually sent. */
  async send(text: string): Promise<boolean> {
    if (!this.canSend(text)) return false;
    const sessionId = this.vm.sessionId!;
    this.vm.pending = true;
    this.say("user", text);
    this.notify();
    try {
      const turn = await this.api.sendMessage(sessionId, text);
      for (const line of turn.replies) this.say("bot", line);
      this.vm.map = turn.map;
      if (turn.hypotheses !== null) this.vm.hypotheses = turn.hypotheses;
      this.vm.done = turn.done;
    } catch (error) {
      if (error instanceof ApiError) {
        if (error.status === 410) this.vm.done = true;
        this.say("notice", error.message);
      } else {
        this.vm.connected = false;
        this.say("notice", "The mentor service did not answer; try again.");
      }
    } finally {
      this.vm.pending = false;
      this.notify();
    }
    return true;
  }

  async downloadExport(format: "json" | "dot" | "markdown"): Promise<string | null> {
    if (!this.vm.sessionId) return null;
    try {
      return await this.api.fetchExport(this.vm.sessionId, format);
    } catch (error) {
      this.say("notice", error instanceof ApiError ? error.message : "Export failed.");
      this.notify();
      return null;
    }
  }
}
