// Application entry point: wires the canvas, the pointer-device pose
// source, and the session connection together.
//
// The mouse position on the canvas is converted to a head pose (yaw/pitch
// at the selected viewing distance) and streamed to the service at a fixed
// frame interval; the latest server state is rendered on animation frames.
// Moving the pointer off the canvas keeps repeating the last pose, so the
// cursor holds in place.

import { SessionClient } from "./client.js";
import { poseFromPointer, DEFAULT_SCREEN } from "./pose.js";
import type { HelloMessage } from "./protocol.js";
import { initialSession, reduce, trialLog, type UiSession } from "./state.js";
import { renderFrame } from "./render.js";

const FRAME_MS = 16;
const DISTANCE_DEPTH_M: Record<string, number> = {
  near: 0.3302,
  mid: 0.4318,
  far: 0.5334,
};

function main(): void {
  const canvas = document.getElementById("stage") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d")!;
  const connectBtn = document.getElementById("connect") as HTMLButtonElement;
  const downloadBtn = document.getElementById("download") as HTMLButtonElement;
  const distanceSel = document.getElementById("distance") as HTMLSelectElement;
  const modeSel = document.getElementById("mode") as HTMLSelectElement;
  const statusEl = document.getElementById("status") as HTMLSpanElement;

  canvas.width = DEFAULT_SCREEN.width_pt;
  canvas.height = DEFAULT_SCREEN.height_pt;

  let state: UiSession = initialSession();
  let lastPose: number[] | null = null;
  let t = 0;
  let streamTimer: ReturnType<typeof setInterval> | null = null;

  const client = new SessionClient(
    `ws://${location.host}/session`,
    (msg) => {
      state = reduce(state, msg);
    },
    (status) => {
      statusEl.textContent = status;
      if (status !== "open" && streamTimer !== null) {
        clearInterval(streamTimer);
        streamTimer = null;
      }
      if (status === "error" || status === "closed") {
        state = { ...state, error: state.error ?? "disconnected — reconnect to restart" };
      }
    },
  );

  canvas.addEventListener("mousemove", (ev) => {
    const rect = canvas.getBoundingClientRect();
    const x = ((ev.clientX - rect.left) / rect.width) * DEFAULT_SCREEN.width_pt;
    const y = ((ev.clientY - rect.top) / rect.height) * DEFAULT_SCREEN.height_pt;
    const depth = DISTANCE_DEPTH_M[distanceSel.value] ?? DISTANCE_DEPTH_M.mid;
    lastPose = poseFromPointer(x, y, [0, 0, depth]);
  });

  connectBtn.addEventListener("click", () => {
    state = initialSession();
    lastPose = null;
    t = 0;
    const hello: HelloMessage = {
      type: "hello",
      mode: modeSel.value === "study" ? "study" : "test",
      participant: "browser",
      distance: (distanceSel.value as HelloMessage["distance"]) ?? "mid",
    };
    client.connect(hello);
    if (streamTimer === null) {
      streamTimer = setInterval(() => {
        if (lastPose && client.connected) {
          client.send({ type: "pose", t, m: lastPose });
          t += FRAME_MS;
        }
      }, FRAME_MS);
    }
  });

  downloadBtn.addEventListener("click", () => {
    const blob = new Blob([trialLog(state)], { type: "application/x-ndjson" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "trials.ndjson";
    a.click();
    URL.revokeObjectURL(a.href);
  });

  const draw = () => {
    renderFrame(ctx, state, canvas.width, canvas.height);
    requestAnimationFrame(draw);
  };
  requestAnimationFrame(draw);
}

main();
