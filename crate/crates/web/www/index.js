import init, { omegaP, solitonProfile, lPlusSpectrum, growthCurve, groundState } from "./pkg/waveguide_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function params() {
  return { p: num("p"), omega: num("omega"), L: num("L"), nx: num("nx") };
}

// line plot of (x, y) pairs with a zero axis
function plot(canvas, pairs, color) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const xs = pairs.map((q) => q[0]);
  const ys = pairs.map((q) => q[1]);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const y0 = Math.min(0, ...ys);
  const y1 = Math.max(...ys) || 1;
  const px = (x) => 30 + ((x - x0) / (x1 - x0 || 1)) * (w - 40);
  const py = (y) => h - 20 - ((y - y0) / (y1 - y0)) * (h - 30);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(30, py(0));
  ctx.lineTo(w - 10, py(0));
  ctx.stroke();
  ctx.fillStyle = "#333";
  ctx.fillText(y1.toPrecision(3), 2, 12);
  ctx.fillText(x0.toPrecision(3), 30, h - 4);
  ctx.fillText(x1.toPrecision(3), w - 50, h - 4);
  ctx.strokeStyle = color;
  ctx.lineWidth = 2;
  ctx.beginPath();
  pairs.forEach(([x, y], i) => (i ? ctx.lineTo(px(x), py(y)) : ctx.moveTo(px(x), py(y))));
  ctx.stroke();
}

function pairsOf(flat) {
  const out = [];
  for (let i = 0; i < flat.length; i += 2) out.push([flat[i], flat[i + 1]]);
  return out;
}

function guarded(out, f) {
  try {
    f();
  } catch (e) {
    out.textContent = String(e.message || e);
  }
}

function showProfile() {
  guarded($("spectrum"), () => {
    const { p, omega, L, nx } = params();
    plot($("profile"), pairsOf(solitonProfile(p, omega, L, nx)), "#1f5fa8");
    const ev = lPlusSpectrum(p, omega, num("a"), 4, L, nx);
    $("spectrum").textContent = "lowest eigenvalues of L+,a: " + Array.from(ev, (v) => v.toFixed(6)).join("  ");
  });
}

function showGrowth() {
  guarded($("spectrum"), () => {
    const { p, omega, L, nx } = params();
    plot($("growth"), pairsOf(growthCurve(p, omega, num("amax"), num("asteps"), L, Math.min(nx, 256))), "#b33");
  });
}

function showGroundState() {
  const out = $("gs");
  out.textContent = "minimizing...";
  setTimeout(() => guarded(out, () => {
    const { p, omega, L } = params();
    const nx = 128;
    const gs = groundState(p, omega, L, nx, num("ny"));
    const d = gs.density;
    const max = Math.max(...d);
    const canvas = $("heat");
    const ctx = canvas.getContext("2d");
    const img = ctx.createImageData(gs.nx, gs.ny);
    for (let ix = 0; ix < gs.nx; ix++) {
      for (let iy = 0; iy < gs.ny; iy++) {
        const v = d[ix * gs.ny + iy] / max;
        const k = 4 * (iy * gs.nx + ix);
        img.data[k] = 255 * Math.sqrt(v);
        img.data[k + 1] = 255 * v * v;
        img.data[k + 2] = 80 * (1 - v);
        img.data[k + 3] = 255;
      }
    }
    const tmp = new OffscreenCanvas(gs.nx, gs.ny);
    tmp.getContext("2d").putImageData(img, 0, 0);
    ctx.imageSmoothingEnabled = false;
    ctx.drawImage(tmp, 0, 0, canvas.width, canvas.height);
    out.textContent =
      `m_omega = ${gs.action.toFixed(8)}   2π m_line = ${gs.lineAction.toFixed(8)}\n` +
      `y-dependence = ${gs.yDependence.toExponential(3)}   converged: ${gs.converged}`;
  }), 0);
}

await init();
const refreshWp = () => guarded($("wp"), () => ($("wp").textContent = `ω_p = ${omegaP(num("p")).toFixed(6)}`));
$("p").addEventListener("change", refreshWp);
$("run-profile").addEventListener("click", showProfile);
$("run-growth").addEventListener("click", showGrowth);
$("run-gs").addEventListener("click", showGroundState);
refreshWp();
showProfile();
showGrowth();
