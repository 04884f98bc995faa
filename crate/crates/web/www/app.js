import init, { mu_sweep, decay_profile, dim2_energy } from "./pkg/xxcrit_web.js";

const PAD = { l: 60, r: 15, t: 10, b: 35 };

function call(fn, errId, ...args) {
  const v = JSON.parse(fn(...args));
  document.getElementById(errId).textContent = v.error ?? "";
  return v.error ? null : v;
}

// series: [{x, y, color, dash}], axes: {logx, logy, xlabel, ylabel}
function plot(canvas, series, axes) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height;
  ctx.clearRect(0, 0, W, H);
  const fx = axes.logx ? Math.log10 : (v) => v;
  const fy = axes.logy ? Math.log10 : (v) => v;
  const pts = series.flatMap((s) => s.x.map((x, i) => [fx(x), fy(s.y[i])]))
    .filter(([x, y]) => Number.isFinite(x) && Number.isFinite(y));
  let [x0, x1] = [Math.min(...pts.map((p) => p[0])), Math.max(...pts.map((p) => p[0]))];
  let [y0, y1] = [Math.min(...pts.map((p) => p[1])), Math.max(...pts.map((p) => p[1]))];
  if (axes.ymin !== undefined) y0 = Math.min(y0, axes.ymin);
  if (y1 - y0 < 1e-12) y1 = y0 + 1;
  const px = (x) => PAD.l + ((x - x0) / (x1 - x0)) * (W - PAD.l - PAD.r);
  const py = (y) => H - PAD.b - ((y - y0) / (y1 - y0)) * (H - PAD.t - PAD.b);

  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#333";
  ctx.font = "12px system-ui";
  ctx.strokeRect(PAD.l, PAD.t, W - PAD.l - PAD.r, H - PAD.t - PAD.b);
  for (let i = 0; i <= 5; i++) {
    const xv = x0 + ((x1 - x0) * i) / 5, yv = y0 + ((y1 - y0) * i) / 5;
    const xl = axes.logx ? (10 ** xv).toPrecision(2) : xv.toFixed(2);
    const yl = axes.logy ? (10 ** yv).toPrecision(2) : yv.toFixed(3);
    ctx.fillText(xl, px(xv) - 12, H - PAD.b + 15);
    ctx.fillText(yl, 5, py(yv) + 4);
  }
  ctx.fillText(axes.xlabel, W / 2, H - 5);

  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.setLineDash(s.dash ?? []);
    ctx.beginPath();
    let started = false;
    s.x.forEach((x, i) => {
      const X = fx(x), Y = fy(s.y[i]);
      if (!Number.isFinite(X) || !Number.isFinite(Y)) { started = false; return; }
      started ? ctx.lineTo(px(X), py(Y)) : ctx.moveTo(px(X), py(Y));
      started = true;
    });
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

function drawSweep() {
  const t = parseFloat(document.getElementById("sweep-t").value);
  document.getElementById("sweep-t-out").textContent = t.toFixed(2);
  const v = call(mu_sweep, "sweep-err", -2, 2, 201, t);
  if (!v) return;
  plot(document.getElementById("sweep"), [
    { x: v.mu, y: v.fs_kinetic, color: "#1f77b4" },
    { x: v.mu, y: v.entropy, color: "#d62728" },
    { x: v.mu, y: v.concurrence, color: "#2ca02c" },
  ], { xlabel: "μ/J", ymin: 0 });
}

function drawProfile() {
  const mu = parseFloat(document.getElementById("prof-mu").value);
  const t = parseFloat(document.getElementById("prof-t").value);
  const r = parseInt(document.getElementById("prof-r").value, 10);
  const v = call(decay_profile, "prof-err", mu, t, r);
  const label = document.getElementById("prof-class");
  if (!v) { label.textContent = ""; return; }
  const fit = v.classification === "quasi_long_range" && v.exponent !== null
    ? `, |C(r)| ~ r^-${v.exponent.toFixed(3)}`
    : v.classification === "short_range" && v.inverse_length !== null
      ? `, correlation length ${(1 / v.inverse_length).toFixed(3)}`
      : "";
  label.textContent = `classification: ${v.classification}${fit}`;
  plot(document.getElementById("profile"), [{ x: v.r, y: v.value, color: "#1f77b4" }],
    { xlabel: "r (log)", logx: true, logy: true });
}

function drawDim2() {
  const j = parseFloat(document.getElementById("d2-j").value);
  const jp = parseFloat(document.getElementById("d2-jp").value);
  const v = call(dim2_energy, "d2-err", j, jp, 0.05, 50, 60);
  if (!v) return;
  const abs = (a) => a.map(Math.abs);
  plot(document.getElementById("dim2"), [
    { x: v.temperature, y: abs(v.u), color: "#1f77b4" },
    { x: v.temperature, y: abs(v.asymptote), color: "#ff7f0e", dash: [5, 4] },
    { x: v.temperature, y: v.temperature.map(() => -v.separable_bound), color: "#888", dash: [2, 3] },
  ], { xlabel: "T (log)", logx: true, logy: true });
}

await init();
document.getElementById("sweep-t").addEventListener("input", drawSweep);
for (const id of ["prof-mu", "prof-t", "prof-r"]) document.getElementById(id).addEventListener("change", drawProfile);
for (const id of ["d2-j", "d2-jp"]) document.getElementById(id).addEventListener("change", drawDim2);
drawSweep();
drawProfile();
drawDim2();
