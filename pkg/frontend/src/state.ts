// Client session state: a pure reducer over server messages.
//
// The UI never computes dwell or hit-testing itself; everything rendered
// (cursor, fill rings, trial advance, phase changes) comes from the
// server. The fill shown for a widget is exactly the last progress value
// the server reported for it.

import type { LayoutDoc, ServerMessage, TrialMessage } from "./protocol.js";

export interface TestSummary {
  layout: string;
  n_trials: number;
  elapsed_ms: number;
}

export interface UiSession {
  phase: string;
  layout: LayoutDoc | null;
  sequence: string[];
  /** Index of the current (next expected) entry in the sequence. */
  sequenceIndex: number;
  cursor: { x: number; y: number } | null;
  /** widget id -> last reported dwell progress in [0, 1] */
  fill: Record<string, number>;
  trials: TrialMessage[];
  summaries: TestSummary[];
  error: string | null;
}

export function initialSession(): UiSession {
  return {
    phase: "connecting",
    layout: null,
    sequence: [],
    sequenceIndex: 0,
    cursor: null,
    fill: {},
    trials: [],
    summaries: [],
    error: null,
  };
}

export function reduce(state: UiSession, msg: ServerMessage): UiSession {
  switch (msg.type) {
    case "cursor":
      return { ...state, cursor: { x: msg.x, y: msg.y } };

    case "event": {
      const fill = { ...state.fill };
      if (msg.kind === "exit") {
        delete fill[msg.widget];
      } else {
        fill[msg.widget] = msg.progress;
      }
      return { ...state, fill };
    }

    case "trial":
      return {
        ...state,
        trials: [...state.trials, msg],
        sequenceIndex: state.sequenceIndex + 1,
      };

    case "phase":
      return {
        ...state,
        phase: msg.name,
        layout: msg.layout ?? (msg.name === "summary" ? null : state.layout),
        sequence: msg.sequence ?? [],
        sequenceIndex: 0,
        fill: {},
        summaries: msg.tests ?? state.summaries,
      };

    case "error":
      return { ...state, error: msg.message };
  }
}

/** Labels still to be selected, for the sequence banner. */
export function remainingSequence(state: UiSession): string[] {
  return state.sequence.slice(state.sequenceIndex);
}

export function currentTarget(state: UiSession): string | null {
  return state.sequence[state.sequenceIndex] ?? null;
}

export function nextTarget(state: UiSession): string | null {
  return state.sequence[state.sequenceIndex + 1] ?? null;
}

/** Trial log serialized the same way the offline pipeline stores records. */
export function trialLog(state: UiSession): string {
  return state.trials
    .map((t) => {
      const { type, ...record } = t;
      void type;
      return JSON.stringify(record, Object.keys(record).sort());
    })
    .join("\n");
}
