import init, { overlapCurve, windowSeries, transitionCurve, criticalR } from "./pkg/rblab_demo.js";

const num = (id) => Number(document.getElementById(id).value);
const status = (msg) => (document.getElementById("status").textContent = msg);

// points: array of [x, y]; series drawn in order with the given colours
function plot(canvasId, series, { yMin, yMax, vline } = {}) {
  const c = document.getElementById(canvasId);
  const g = c.getContext("2d");
  g.clearRect(0, 0, c.width, c.height);
  const all = series.flatMap((s) => s.points).filter(([, y]) => Number.isFinite(y));
  if (all.length === 0) return;
  const xs = all.map(([x]) => x);
  const ys = all.map(([, y]) => y);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const y0 = yMin ?? Math.min(...ys);
  const y1 = yMax ?? Math.max(...ys);
  const pad = 30;
  const sx = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (c.width - 2 * pad);
  const sy = (y) => c.height - pad - ((y - y0) / (y1 - y0 || 1)) * (c.height - 2 * pad);
  g.strokeStyle = "#999";
  g.strokeRect(pad, pad, c.width - 2 * pad, c.height - 2 * pad);
  g.fillStyle = "#555";
  g.fillText(x0.toPrecision(3), pad, c.height - 10);
  g.fillText(x1.toPrecision(3), c.width - pad - 30, c.height - 10);
  g.fillText(y1.toPrecision(3), 2, pad + 4);
  g.fillText(y0.toPrecision(3), 2, c.height - pad);
  if (vline !== undefined) {
    g.strokeStyle = "#c33";
    g.setLineDash([4, 4]);
    g.beginPath();
    g.moveTo(sx(vline), pad);
    g.lineTo(sx(vline), c.height - pad);
    g.stroke();
    g.setLineDash([]);
  }
  for (const s of series) {
    g.strokeStyle = s.color;
    g.beginPath();
    let started = false;
    for (const [x, y] of s.points) {
      if (!Number.isFinite(y)) continue;
      started ? g.lineTo(sx(x), sy(y)) : g.moveTo(sx(x), sy(y));
      started = true;
    }
    g.stroke();
  }
}

function chunks(values, width) {
  const out = [];
  for (let i = 0; i < values.length; i += width) out.push(Array.from(values.slice(i, i + width)));
  return out;
}

function showThreshold() {
  document.getElementById("rcr").textContent = `r_cr = ${criticalR(num("alpha"), num("p")).toFixed(6)}`;
}

function drawOverlap() {
  const v = overlapCurve(num("k"), num("alpha"), num("p"), num("r"), 201);
  plot("h-plot", [{ color: "#1f5fa8", points: chunks(v, 2) }]);
}

function drawWindow() {
  const rows = chunks(windowSeries(num("k"), num("alpha"), num("p"), num("delta"), num("nlo"), num("nhi"), 12), 4);
  const logn = (n) => Math.log10(n);
  plot("w-plot", [
    { color: "#1f5fa8", points: rows.map(([n, lo]) => [logn(n), lo]) },
    { color: "#999", points: rows.map(([n, , cr]) => [logn(n), cr]) },
    { color: "#c33", points: rows.map(([n, , , hi]) => [logn(n), hi]) },
  ]);
}

function drawTransition() {
  status("running exact solver...");
  setTimeout(() => {
    const t0 = performance.now();
    const rows = chunks(
      transitionCurve(num("n"), num("k"), num("alpha"), num("p"), num("rlo"), num("rhi"), 25, num("trials"), 1),
      4,
    );
    plot(
      "t-plot",
      [
        { color: "#bbb", points: rows.map(([r, , lo]) => [r, lo]) },
        { color: "#bbb", points: rows.map(([r, , , hi]) => [r, hi]) },
        { color: "#1f5fa8", points: rows.map(([r, p]) => [r, p]) },
      ],
      { yMin: 0, yMax: 1, vline: criticalR(num("alpha"), num("p")) },
    );
    status(`${rows.length} points in ${((performance.now() - t0) / 1000).toFixed(1)} s`);
  }, 0);
}

function guard(f) {
  return () => {
    try {
      showThreshold();
      f();
    } catch (e) {
      status(String(e.message ?? e));
    }
  };
}

await init();
document.getElementById("draw-h").onclick = guard(drawOverlap);
document.getElementById("draw-w").onclick = guard(drawWindow);
document.getElementById("draw-t").onclick = guard(drawTransition);
guard(drawOverlap)();
guard(drawWindow)();
