import init, { beta_predict, collapse_table, run_machine } from "./pkg/gu_wasm.js";

const BB3 = `# Three-state busy beaver
states: A B C H
alphabet: _ 1
start: A
A _ -> B 1 R
A 1 -> H 1 R
B _ -> C _ R
B 1 -> B 1 R
C _ -> C 1 L
C 1 -> A 1 L
`;

const $ = (id) => document.getElementById(id);

function call(f, target) {
  try {
    target.classList.remove("error");
    return JSON.parse(f());
  } catch (e) {
    target.textContent = String(e);
    target.classList.add("error");
    return null;
  }
}

function fillTable(table, header, rows) {
  table.replaceChildren();
  const head = table.insertRow();
  for (const h of header) {
    const th = document.createElement("th");
    th.textContent = h;
    head.appendChild(th);
  }
  for (const cells of rows) {
    const tr = table.insertRow();
    for (const c of cells) {
      const td = tr.insertCell();
      if (typeof c === "object") {
        td.textContent = c.text;
        td.className = c.cls;
      } else {
        td.textContent = c;
      }
    }
  }
}

function drawHistogram(canvas, bars) {
  const g = canvas.getContext("2d");
  g.clearRect(0, 0, canvas.width, canvas.height);
  if (bars.length === 0) return;
  const maxValue = Math.max(...bars.map((b) => b.value));
  const slot = canvas.width / (maxValue + 1);
  const top = Math.max(...bars.map((b) => b.probability));
  g.font = "11px monospace";
  g.textAlign = "center";
  for (const b of bars) {
    const h = (b.probability / top) * (canvas.height - 30);
    const x = b.value * slot;
    g.fillStyle = "#4a7";
    g.fillRect(x + 2, canvas.height - 15 - h, Math.max(slot - 4, 1), h);
    g.fillStyle = "#222";
    g.fillText(String(b.value), x + slot / 2, canvas.height - 3);
    if (slot > 30) g.fillText(b.frequency, x + slot / 2, canvas.height - 18 - h);
  }
}

function predict(ev) {
  ev?.preventDefault();
  const summary = $("beta-summary");
  const p = call(() => beta_predict($("beta-seq").value, Number($("beta-bound").value)), summary);
  if (!p) return;
  const fit = p.characteristic ? `characteristic pair b=${p.characteristic[0]}, c=${p.characteristic[1]}` : "no pair in bound";
  summary.textContent = `${p.total} matching pairs; ${fit}`;
  drawHistogram($("beta-chart"), p.distribution);
  fillTable($("beta-pairs"), ["b", "c"], p.pairs);
}

function collapse(ev) {
  ev?.preventDefault();
  const summary = $("collapse-summary");
  const t = call(
    () => collapse_table($("collapse-pred").value, Number($("collapse-k").value), $("collapse-measure").value, Number($("collapse-upto").value)),
    summary,
  );
  if (!t) return;
  summary.textContent = `horizons: ${t.history.join(" → ")}`;
  const cell = (v, other) => ({ text: v, cls: v === "loop" ? "loop" : v !== other ? "changed" : "" });
  fillTable(
    $("collapse-table"),
    ["n", "predicate", "before", "after"],
    t.rows.map((r) => [r.n, r.predicate, cell(r.before, r.before), cell(r.after, r.before)]),
  );
}

function drawSpaceTime(canvas, frames) {
  const g = canvas.getContext("2d");
  g.clearRect(0, 0, canvas.width, canvas.height);
  let lo = Infinity;
  let hi = -Infinity;
  for (const f of frames) {
    lo = Math.min(lo, f.head);
    hi = Math.max(hi, f.head);
    for (const [c] of f.cells) {
      lo = Math.min(lo, c);
      hi = Math.max(hi, c);
    }
  }
  const cols = hi - lo + 1;
  const size = Math.max(1, Math.min(16, Math.floor(canvas.width / cols), Math.floor(canvas.height / frames.length)));
  const palette = ["#fff", "#333", "#36c", "#c63", "#393", "#939"];
  const symbolIndex = new Map([["_", 0]]);
  frames.forEach((f, row) => {
    for (const [c, s] of f.cells) {
      if (!symbolIndex.has(s)) symbolIndex.set(s, symbolIndex.size);
      g.fillStyle = palette[symbolIndex.get(s) % palette.length];
      g.fillRect((c - lo) * size, row * size, size, size);
    }
    g.fillStyle = "rgba(220, 40, 40, 0.8)";
    g.fillRect((f.head - lo) * size + size / 4, row * size + size / 4, Math.max(size / 2, 1), Math.max(size / 2, 1));
  });
}

function run(ev) {
  ev?.preventDefault();
  const summary = $("run-summary");
  const canvas = $("run-chart");
  const t = call(() => run_machine($("run-src").value, $("run-input").value, Number($("run-budget").value), 320), summary);
  if (!t) return;
  summary.textContent = t.summary + (t.truncated ? ` (first ${t.frames.length} rows shown)` : "");
  drawSpaceTime(canvas, t.frames);
}

await init();
$("run-src").value = BB3;
$("beta-form").addEventListener("submit", predict);
$("collapse-form").addEventListener("submit", collapse);
$("run-form").addEventListener("submit", run);
predict();
collapse();
run();
