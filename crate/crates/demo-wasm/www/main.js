import init, * as tgci from "./pkg/tgci_demo_wasm.js";

const $ = (id) => document.getElementById(id);
const fail = (el, e) => { el.innerHTML = `<p class="err">${e.message ?? e}</p>`; };

function interpret() {
  const out = $("interp");
  try {
    const nodes = JSON.parse(tgci.interpret($("seq").value, $("theory").value));
    const rows = nodes
      .filter((n) => n.kind !== "leaf")
      .map((n) => {
        const w = Math.round(Math.abs(n.partial) * 120);
        const cls = n.partial < 0 ? "bar neg" : "bar";
        const pad = "&nbsp;".repeat(2 * n.depth);
        return `<tr><td>${pad}${n.path.split("/").pop()} <small>${n.kind}</small></td>` +
          `<td>${n.partial.toFixed(3)}</td><td><span class="${cls}" style="width:${w}px"></span></td>` +
          `<td>${n.boolean}</td></tr>`;
      });
    out.innerHTML = `<table><tr><th>node</th><th>partial</th><th></th><th>boolean</th></tr>${rows.join("")}</table>`;
  } catch (e) { fail(out, e); }
}

function perturb() {
  const out = $("perturb");
  try {
    const kind = document.querySelector("input[name=kind]:checked").value;
    const r = JSON.parse(tgci.perturb_preview($("seq").value, $("theory").value, kind,
      Number($("rate").value), Number($("pseed").value)));
    const changed = new Set(r.changed);
    const mark = (s) => [...s].map((c, i) => (changed.has(i) ? `<b>${c}</b>` : c)).join("");
    const intended = r.intended.map(([p, k]) => `${p} &rarr; rule ${k + 1}`).join(", ");
    out.innerHTML =
      `<div class="seq">expected ${r.expected}\nbefore   ${mark(r.before)}\nafter    ${mark(r.after)}</div>` +
      `<p>${r.changed.length} positions changed; root score ${r.top_before.toFixed(3)} &rarr; ${r.top_after.toFixed(3)}</p>` +
      `<p><small>intended disjuncts: ${intended}</small></p>`;
  } catch (e) { fail(out, e); }
}

const COLORS = { plain: "#888", tgci: "#2b6cb0", boolean: "#c05621" };

function drawCurves(lines) {
  const cv = $("curve");
  const g = cv.getContext("2d");
  const W = cv.width, H = cv.height, L = 50, R = 120, T = 15, B = 35;
  g.clearRect(0, 0, W, H);
  const sizes = lines[0].sizes;
  const x = (s) => L + ((s - sizes[0]) / (sizes[sizes.length - 1] - sizes[0])) * (W - L - R);
  const y = (a) => T + (1 - (a - 0.4) / 0.6) * (H - T - B);
  g.strokeStyle = "#ccc"; g.fillStyle = "#444"; g.font = "12px sans-serif";
  for (let a = 0.4; a <= 1.0001; a += 0.1) {
    g.beginPath(); g.moveTo(L, y(a)); g.lineTo(W - R, y(a)); g.stroke();
    g.fillText(`${Math.round(a * 100)}%`, 10, y(a) + 4);
  }
  sizes.forEach((s) => g.fillText(String(s), x(s) - 8, H - 15));
  g.fillText("training examples", (W - R) / 2, H - 1);
  lines.forEach((l, k) => {
    const c = COLORS[l.method] ?? "#000";
    g.fillStyle = c + "33";
    g.beginPath();
    l.sizes.forEach((s, i) => g.lineTo(x(s), y(Math.min(1, l.ci_high[i]))));
    [...l.sizes].reverse().forEach((s, j) => g.lineTo(x(s), y(Math.max(0.4, l.ci_low[l.sizes.length - 1 - j]))));
    g.fill();
    g.strokeStyle = c; g.lineWidth = 2;
    g.beginPath();
    l.sizes.forEach((s, i) => g.lineTo(x(s), y(l.mean[i])));
    g.stroke();
    g.lineWidth = 1;
    g.fillStyle = c;
    g.fillText(l.method, W - R + 15, T + 20 + 18 * k);
  });
}

function curve() {
  const msg = $("curve-msg");
  msg.textContent = "running...";
  setTimeout(() => {
    try {
      const t0 = performance.now();
      const lines = JSON.parse(tgci.synthetic_curve(Number($("mp").value),
        Number($("parts").value), Number($("cseed").value)));
      drawCurves(lines);
      const last = lines.map((l) => `${l.method} ${(100 * l.mean[l.mean.length - 1]).toFixed(1)}%`);
      msg.textContent = `at 80 examples: ${last.join(", ")} (${Math.round(performance.now() - t0)} ms)`;
    } catch (e) { fail(msg, e); }
  }, 10);
}

await init();
$("theory").placeholder = tgci.builtin_theory();
$("seq").value = tgci.sample(1);
$("sample").onclick = () => { $("seq").value = tgci.sample(Math.floor(Math.random() * 1e6)); interpret(); };
$("run-interp").onclick = interpret;
$("seq").oninput = interpret;
$("run-perturb").onclick = perturb;
$("rate").oninput = () => { $("rate-val").textContent = Number($("rate").value).toFixed(2); };
$("mp").oninput = () => { $("mp-val").textContent = Number($("mp").value).toFixed(2); };
$("run-curve").onclick = curve;
interpret();
curve();
