// Wire protocol for the /session WebSocket.
//
// Inbound (client -> service): hello, pose, end.
// Outbound (service -> client): cursor, event, trial, phase, error.
// Every frame is one UTF-8 JSON object with a "type" field.

export interface ScreenProfile {
  width_pt: number;
  height_pt: number;
  meters_per_ndc_x: number;
  meters_per_ndc_y: number;
}

export interface HelloMessage {
  type: "hello";
  mode: "test" | "study";
  participant: string;
  distance: "near" | "mid" | "far";
  layout?: "numbers" | "alphabets";
  select_kind?: "glance" | "gaze";
  glance_ms?: number;
  gaze_ms?: number;
  alpha?: number;
  screen?: ScreenProfile;
}

export interface PoseMessage {
  type: "pose";
  t: number;
  m: number[]; // 16 values, row-major 4x4 world transform
}

export interface EndMessage {
  type: "end";
}

export type ClientMessage = HelloMessage | PoseMessage | EndMessage;

export interface WidgetDoc {
  id: string;
  rect: [number, number, number, number]; // x, y, w, h in pt
  label: string;
  glance_ms: number;
  gaze_ms: number;
}

export interface LayoutDoc {
  name: string;
  screen: { width_pt: number; height_pt: number };
  targets: WidgetDoc[];
}

export interface CursorMessage {
  type: "cursor";
  t: number;
  x: number;
  y: number;
}

export interface EventMessage {
  type: "event";
  t: number;
  widget: string;
  kind: "enter" | "progress" | "glance" | "gaze" | "exit";
  progress: number;
  x: number;
  y: number;
  in_bounds: boolean;
}

export interface TrialMessage {
  type: "trial";
  index: number;
  target: string;
  target_center: [number, number];
  prev_center: [number, number];
  selection: [number, number];
  amplitude_pt: number;
  mt_ms: number;
  t_select: number;
}

export interface PhaseMessage {
  type: "phase";
  name: "welcome" | "practice" | "test1" | "test2" | "test" | "summary";
  layout?: LayoutDoc;
  sequence?: string[];
  tests?: { layout: string; n_trials: number; elapsed_ms: number }[];
}

export interface ErrorMessage {
  type: "error";
  message: string;
}

export type ServerMessage =
  | CursorMessage
  | EventMessage
  | TrialMessage
  | PhaseMessage
  | ErrorMessage;

export function encodeMessage(msg: ClientMessage): string {
  return JSON.stringify(msg);
}

export function parseServerMessage(raw: string): ServerMessage {
  let obj: unknown;
  try {
    obj = JSON.parse(raw);
  } catch {
    throw new Error(`unparseable frame: ${raw.slice(0, 80)}`);
  }
  if (typeof obj !== "object" || obj === null || !("type" in obj)) {
    throw new Error("frame is not an object with a type field");
  }
  const type = (obj as { type: string }).type;
  if (!["cursor", "event", "trial", "phase", "error"].includes(type)) {
    throw new Error(`unknown server message type ${type}`);
  }
  return obj as ServerMessage;
}
