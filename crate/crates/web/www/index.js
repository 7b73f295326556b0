import init, { counterexample, positive_form, odd_quadratic } from "./pkg/kbeq_web.js";

const $ = (id) => document.getElementById(id);

function status(el, lines, ok) {
  el.className = "status " + (ok ? "ok" : "bad");
  el.textContent = lines.join("\n");
}

function drawSigns(canvas, size, values, marks = new Set(), outline = new Set()) {
  const ctx = canvas.getContext("2d");
  const cell = canvas.width / size;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  values.forEach((v, i) => {
    // Row-major with the first coordinate as the row.
    const x = (i % size) * cell, y = Math.floor(i / size) * cell;
    ctx.fillStyle = v < 0 ? "#d9534f" : "#e8eef5";
    ctx.fillRect(x, y, cell - 1, cell - 1);
    if (outline.has(i)) {
      ctx.strokeStyle = "#222";
      ctx.lineWidth = 3;
      ctx.strokeRect(x + 2, y + 2, cell - 5, cell - 5);
    }
    if (marks.has(i)) {
      ctx.fillStyle = "#222";
      ctx.beginPath();
      ctx.arc(x + cell / 2, y + cell / 2, cell / 8, 0, 2 * Math.PI);
      ctx.fill();
    }
  });
}

function heatmap(canvas, size, values) {
  const ctx = canvas.getContext("2d");
  const cell = canvas.width / size;
  const finite = values.filter(Number.isFinite);
  const lo = Math.min(...finite), hi = Math.max(...finite);
  values.forEach((v, i) => {
    const t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
    ctx.fillStyle = `hsl(${240 - 240 * t}, 70%, ${35 + 30 * t}%)`;
    ctx.fillRect((i % size) * cell, Math.floor(i / size) * cell, cell, cell);
  });
}

function setupCounterexample() {
  const data = JSON.parse(counterexample());
  if (data.error) return status($("ce-status"), [data.error], false);
  const key = (p) => p[0] * 4 + p[1];
  const changing = new Set(data.f_2x_violations.flatMap(([x, y]) => [key(x), key(y)]));
  const render = (outline = new Set()) => {
    drawSigns($("ce-f"), 4, data.f, changing, outline);
    drawSigns($("ce-g"), 4, data.g, new Set(), outline);
  };
  render();
  status($("ce-status"), [
    `equation: ${data.check.holds ? "holds" : "fails"} on ${data.check.pairs_checked} pairs`,
    `f constant on cosets of 4X: ${data.f_constant_on_4x_cosets}`,
    `f constant on cosets of 2X: ${data.f_constant_on_2x_cosets}`,
    `recovered character: trivial=${data.form.alpha.free_turns.length === 0 && data.form.alpha.torsion_exponents.every((e) => e === 0)}`,
    `sign pairs on (Z/4)^2 in total: ${data.census_count}`,
  ], data.check.holds);
  for (const id of ["ce-f", "ce-g"]) {
    $(id).addEventListener("click", (ev) => {
      const cell = $(id).width / 4;
      const r = Math.floor(ev.offsetY / cell), c = Math.floor(ev.offsetX / cell);
      const same = new Set();
      for (let i = 0; i < 16; i++) {
        const dr = Math.floor(i / 4) - r, dc = (i % 4) - c;
        if (((dr % 2) + 2) % 2 === 0 && ((dc % 2) + 2) % 2 === 0) same.add(i);
      }
      render(same);
    });
  }
}

function positiveForm() {
  const v = (id) => $(id).value.trim();
  return {
    group: "Z^2",
    p: { matrix: [[v("pa"), v("pb")], [v("pb"), v("pc")]] },
    l: { coeffs: [v("l1"), v("l2")] },
    m: { coeffs: [v("m1"), v("m2")] },
    r: {
      entries: [
        { coset: [0, 0], value: v("r00") },
        { coset: [0, 1], value: v("r01") },
        { coset: [1, 0], value: v("r10") },
        { coset: [1, 1], value: v("r11") },
      ],
    },
  };
}

function updatePositive() {
  const radius = Number($("pos-radius").value);
  $("pos-radius-v").textContent = radius;
  const data = JSON.parse(positive_form(JSON.stringify(positiveForm()), radius));
  if (data.error) return status($("pos-status"), [data.error], false);
  const size = 2 * radius + 1;
  heatmap($("pos-f"), size, data.log_f);
  heatmap($("pos-g"), size, data.log_g);
  const rec = data.recovered;
  status($("pos-status"), [
    `equation: ${data.check.holds ? "holds" : "fails"} on ${data.check.pairs_checked} pairs`,
    rec.error ? `decomposition: ${rec.message}` : `decomposition recovers the form exactly: ${rec.matches}`,
  ], data.check.holds && rec.matches === true);
}

function updateOddQuadratic() {
  const radius = Number($("oq-radius").value);
  $("oq-radius-v").textContent = radius;
  const data = JSON.parse(odd_quadratic(radius));
  if (data.error) return status($("oq-status"), [data.error], false);
  drawSigns($("oq"), data.size, data.f);
  const d = data.decomposition;
  const w = d.multiplicativity_witness;
  status($("oq-status"), [
    `equation with g = f: ${data.check.holds ? "holds" : "fails"} on ${data.check.pairs_checked} pairs`,
    w ? `sign part: a(x+y) != a(x)a(y) at x=(${w[0]}), y=(${w[1]})` : `sign part is multiplicative`,
  ], data.check.holds);
}

await init();
setupCounterexample();
for (const id of ["pa", "pb", "pc", "l1", "l2", "m1", "m2", "r00", "r01", "r10", "r11", "pos-radius"]) {
  $(id).addEventListener("input", updatePositive);
}
$("oq-radius").addEventListener("input", updateOddQuadratic);
updatePositive();
updateOddQuadratic();
