// Canvas renderer. Draws the layout in its pt coordinate system scaled to
// fit the canvas; all positions come straight from the session state.

import type { UiSession } from "./state.js";
import { currentTarget, nextTarget, remainingSequence } from "./state.js";

const COLORS = {
  background: "#ffffff",
  widget: "#e8e8ed",
  widgetBorder: "#c7c7cc",
  current: "#ff9500", // next target to hit
  next: "#8e8e93", // the one after it
  fill: "rgba(0, 122, 255, 0.45)", // dwell progress
  label: "#1c1c1e",
  cursor: "#ff2d55",
  banner: "#3a3a3c",
  done: "#34c759",
};

export function renderFrame(
  ctx: CanvasRenderingContext2D,
  state: UiSession,
  canvasWidth: number,
  canvasHeight: number,
): void {
  ctx.clearRect(0, 0, canvasWidth, canvasHeight);
  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, canvasWidth, canvasHeight);

  if (state.phase === "welcome") {
    drawCenteredText(ctx, canvasWidth, canvasHeight, [
      "Head pointing study",
      "Keep your head about arm's length from the screen.",
      "Hover the cursor on a key until it fills to select it.",
      "Dwell on Start to begin.",
    ]);
  }

  if (state.phase === "summary") {
    const lines = ["All done!"];
    for (const s of state.summaries) {
      lines.push(
        `${s.layout}: ${s.n_trials} selections in ${(s.elapsed_ms / 1000).toFixed(1)} s`,
      );
    }
    drawCenteredText(ctx, canvasWidth, canvasHeight, lines);
  }

  const layout = state.layout;
  if (layout) {
    const scale = Math.min(
      canvasWidth / layout.screen.width_pt,
      canvasHeight / layout.screen.height_pt,
    );
    ctx.save();
    ctx.scale(scale, scale);

    const current = currentTarget(state);
    const next = nextTarget(state);
    for (const widget of layout.targets) {
      const [x, y, w, h] = widget.rect;
      ctx.fillStyle =
        widget.label === current
          ? COLORS.current
          : widget.label === next
            ? COLORS.next
            : COLORS.widget;
      ctx.fillRect(x, y, w, h);

      const progress = state.fill[widget.id] ?? 0;
      if (progress > 0) {
        // fill from the bottom up, proportional to dwell progress
        ctx.fillStyle = COLORS.fill;
        ctx.fillRect(x, y + h * (1 - progress), w, h * progress);
      }

      ctx.strokeStyle = COLORS.widgetBorder;
      ctx.strokeRect(x, y, w, h);
      ctx.fillStyle = COLORS.label;
      ctx.font = `${Math.round(h * 0.4)}px -apple-system, sans-serif`;
      ctx.textAlign = "center";
      ctx.textBaseline = "middle";
      ctx.fillText(widget.label, x + w / 2, y + h / 2);
    }

    // sequence banner: done entries green, the rest dark
    if (state.sequence.length > 0) {
      ctx.font = "16px monospace";
      ctx.textAlign = "left";
      ctx.textBaseline = "top";
      const done = state.sequence.slice(0, state.sequenceIndex).join(" ");
      ctx.fillStyle = COLORS.done;
      ctx.fillText(done, 8, 6);
      ctx.fillStyle = COLORS.banner;
      ctx.fillText(
        remainingSequence(state).join(" "),
        8 + ctx.measureText(done ? done + " " : "").width,
        6,
      );
    }

    // cursor: cross-hair with a ring
    if (state.cursor) {
      const { x, y } = state.cursor;
      ctx.strokeStyle = COLORS.cursor;
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.arc(x, y, 9, 0, Math.PI * 2);
      ctx.moveTo(x - 14, y);
      ctx.lineTo(x + 14, y);
      ctx.moveTo(x, y - 14);
      ctx.lineTo(x, y + 14);
      ctx.stroke();
    }

    ctx.restore();
  }

  if (state.error) {
    ctx.fillStyle = "#ff3b30";
    ctx.font = "14px sans-serif";
    ctx.textAlign = "left";
    ctx.textBaseline = "bottom";
    ctx.fillText(`error: ${state.error}`, 8, canvasHeight - 8);
  }
}

function drawCenteredText(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  lines: string[],
): void {
  ctx.fillStyle = COLORS.label;
  ctx.font = "18px sans-serif";
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  const lineHeight = 28;
  const top = height / 2 - (lines.length - 1) * lineHeight * 0.5 - 60;
  lines.forEach((line, i) => {
    ctx.fillText(line, width / 2, top + i * lineHeight);
  });
}
