// Demo page wiring: three canvases drawing straight from the wasm exports.

import init, { dbm_paths, loewner_grid_flow, local_law_profile } from "./pkg/msle_wasm.js";

const status = document.getElementById("status");

function el(id) { return document.getElementById(id); }

// Simple affine mapper from data coordinates to canvas pixels.
function mapper(canvas, xmin, xmax, ymin, ymax, pad = 34) {
  const w = canvas.width, h = canvas.height;
  return {
    x: (v) => pad + ((v - xmin) / (xmax - xmin)) * (w - 2 * pad),
    y: (v) => h - pad - ((v - ymin) / (ymax - ymin)) * (h - 2 * pad),
  };
}

function axes(ctx, canvas, m, xmin, xmax, ymin, ymax) {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.save();
  ctx.strokeStyle = "#8886";
  ctx.fillStyle = "#888";
  ctx.font = "11px system-ui";
  ctx.beginPath();
  ctx.moveTo(m.x(xmin), m.y(0 >= ymin && 0 <= ymax ? 0 : ymin));
  ctx.lineTo(m.x(xmax), m.y(0 >= ymin && 0 <= ymax ? 0 : ymin));
  ctx.moveTo(m.x(0 >= xmin && 0 <= xmax ? 0 : xmin), m.y(ymin));
  ctx.lineTo(m.x(0 >= xmin && 0 <= xmax ? 0 : xmin), m.y(ymax));
  ctx.stroke();
  ctx.fillText(xmax.toFixed(2), m.x(xmax) - 28, m.y(ymin) + 14);
  ctx.fillText(ymax.toFixed(2), 4, m.y(ymax) + 4);
  ctx.fillText(ymin.toFixed(2), 4, m.y(ymin) + 4);
  ctx.restore();
}

const palette = (i, n) => `hsl(${Math.round((330 * i) / n)} 70% 50%)`;

function drawPaths() {
  const n = +el("p1n").value;
  el("p1nv").value = n;
  const beta = +el("p1beta").value;
  const seed = BigInt(Math.max(0, +el("p1seed").value | 0));
  const steps = 320;
  const data = dbm_paths(n, beta, seed, steps, 1.0);
  const cols = n + 1;
  let ymax = 0.1;
  for (let r = 0; r <= steps; r++)
    for (let i = 1; i <= n; i++)
      ymax = Math.max(ymax, Math.abs(data[r * cols + i]));
  ymax *= 1.05;
  const canvas = el("c1");
  const ctx = canvas.getContext("2d");
  const m = mapper(canvas, 0, 1, -ymax, ymax);
  axes(ctx, canvas, m, 0, 1, -ymax, ymax);
  ctx.lineWidth = 1.1;
  for (let i = 1; i <= n; i++) {
    ctx.strokeStyle = palette(i, n + 1);
    ctx.beginPath();
    for (let r = 0; r <= steps; r++) {
      const t = data[r * cols];
      const v = data[r * cols + i];
      if (r === 0) ctx.moveTo(m.x(t), m.y(v));
      else ctx.lineTo(m.x(t), m.y(v));
    }
    ctx.stroke();
  }
}

function drawGrid() {
  const n = +el("p2n").value;
  el("p2nv").value = n;
  const t = +el("p2t").value;
  el("p2tv").value = t.toFixed(2);
  const seed = BigInt(Math.max(0, +el("p2seed").value | 0));
  const nx = 36, ny = 14;
  const data = loewner_grid_flow(n, 1, seed, t, nx, ny);
  const canvas = el("c2");
  const ctx = canvas.getContext("2d");
  let xmax = 1, ymax = 1;
  for (let k = 0; k < data.length; k += 7) {
    if (data[k + 6] < 0.5) continue;
    xmax = Math.max(xmax, Math.abs(data[k + 2]), Math.abs(data[k + 4]), Math.abs(data[k]));
    ymax = Math.max(ymax, data[k + 3], data[k + 5], data[k + 1]);
  }
  const m = mapper(canvas, -xmax * 1.05, xmax * 1.05, 0, ymax * 1.08);
  axes(ctx, canvas, m, -xmax * 1.05, xmax * 1.05, 0, ymax * 1.08);
  for (let k = 0; k < data.length; k += 7) {
    const alive = data[k + 6] > 0.5;
    if (!alive) {
      // Swallowed seed: mark at its starting location.
      ctx.fillStyle = "#d44a";
      ctx.fillRect(m.x(data[k]) - 1.5, m.y(data[k + 1]) - 1.5, 3, 3);
      continue;
    }
    // Hydrodynamic image: ring.
    ctx.strokeStyle = "#59f";
    ctx.beginPath();
    ctx.arc(m.x(data[k + 4]), m.y(data[k + 5]), 3.2, 0, 6.2832);
    ctx.stroke();
    // Random-flow image: dot.
    ctx.fillStyle = "#222a";
    ctx.beginPath();
    ctx.arc(m.x(data[k + 2]), m.y(data[k + 3]), 2.1, 0, 6.2832);
    ctx.fill();
  }
}

function drawProfile() {
  const n = +el("p3n").value;
  el("p3nv").value = n;
  const y = +el("p3y").value;
  el("p3yv").value = y.toFixed(2);
  const seed = BigInt(Math.max(0, +el("p3seed").value | 0));
  const points = 256;
  const data = local_law_profile(n, 1, seed, 1.0, y, points);
  const canvas = el("c3");
  const ctx = canvas.getContext("2d");
  let xmin = data[0], xmax = data[(points - 1) * 5];
  let ymin = 0, ymax = 0;
  for (let k = 0; k < data.length; k += 5) {
    ymin = Math.min(ymin, data[k + 1], data[k + 2], data[k + 3], data[k + 4]);
    ymax = Math.max(ymax, data[k + 1], data[k + 2], data[k + 3], data[k + 4]);
  }
  const m = mapper(canvas, xmin, xmax, ymin * 1.08, ymax * 1.08 + 0.05);
  axes(ctx, canvas, m, xmin, xmax, ymin * 1.08, ymax * 1.08 + 0.05);
  const series = [
    { off: 1, style: "#d44", width: 1.0 },  // Re M^N
    { off: 2, style: "#16a", width: 1.0 },  // Im M^N
    { off: 3, style: "#d448", width: 2.4 }, // Re M^inf
    { off: 4, style: "#16a8", width: 2.4 }, // Im M^inf
  ];
  for (const s of series) {
    ctx.strokeStyle = s.style;
    ctx.lineWidth = s.width;
    ctx.beginPath();
    for (let k = 0; k < points; k++) {
      const px = m.x(data[k * 5]);
      const py = m.y(data[k * 5 + s.off]);
      if (k === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    }
    ctx.stroke();
  }
  ctx.fillStyle = "#666";
  ctx.font = "12px system-ui";
  ctx.fillText("thin: empirical (N particles), thick: hydrodynamic limit; red Re, blue Im", 40, 16);
}

function hook(ids, fn) {
  for (const id of ids) el(id).addEventListener("input", () => queue(fn));
}

let pending = null;
function queue(fn) {
  if (pending) cancelAnimationFrame(pending);
  pending = requestAnimationFrame(() => { pending = null; fn(); });
}

init().then(() => {
  status.textContent = "";
  drawPaths();
  drawGrid();
  drawProfile();
  hook(["p1n", "p1beta", "p1seed"], drawPaths);
  hook(["p2n", "p2t", "p2seed"], drawGrid);
  hook(["p3n", "p3y", "p3seed"], drawProfile);
}).catch((e) => {
  status.textContent = "failed to load wasm module: " + e +
    " - build it with the commands in the page source.";
});
