import init, { Params, enhance, compare, histogram, rgba_to_gray, gray_to_rgba } from "./pkg/mdhe_web.js";

const $ = (id) => document.getElementById(id);
let source = null; // { gray, width, height }

function params() {
  const p = new Params();
  const grid = Number($("grid").value);
  p.depth = Number($("depth").value);
  p.grid_rows = Math.min(grid, source.height);
  p.grid_cols = Math.min(grid, source.width);
  p.brightness_limit = Number($("limit").value);
  p.clip_limit = Number($("clip").value);
  p.blend = $("blend").checked;
  return p;
}

function drawImage(canvas, gray, width, height) {
  canvas.width = width;
  canvas.height = height;
  const data = new ImageData(new Uint8ClampedArray(gray_to_rgba(gray)), width, height);
  canvas.getContext("2d").putImageData(data, 0, 0);
}

function drawHistogram(canvas, gray) {
  const counts = histogram(gray);
  const ctx = canvas.getContext("2d");
  const peak = Math.max(...counts, 1);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.fillStyle = "#335";
  const bar = canvas.width / 256;
  counts.forEach((c, i) => {
    const h = (c / peak) * canvas.height;
    ctx.fillRect(i * bar, canvas.height - h, Math.ceil(bar), h);
  });
}

function mean(gray) {
  let s = 0;
  for (const v of gray) s += v;
  return s / gray.length;
}

function render() {
  if (!source) return;
  $("error").textContent = "";
  const { gray, width, height } = source;
  try {
    const out = enhance(gray, width, height, $("method").value, params());
    drawImage($("enhanced"), out, width, height);
    drawHistogram($("enhanced-hist"), out);
    $("enhanced").title = `mean ${mean(out).toFixed(2)} (original ${mean(gray).toFixed(2)})`;
  } catch (e) {
    $("error").textContent = String(e.message ?? e);
  }
}

function showComparison() {
  if (!source) return;
  const rows = JSON.parse(compare(source.gray, source.width, source.height, params()));
  const keys = ["psnr", "mse", "rmse", "uiq", "pcc", "snr", "mae"];
  const fmt = (v) => (typeof v === "number" ? v.toFixed(5) : v);
  const table = $("metrics");
  table.innerHTML =
    "<tr><th>Parameter/method</th>" + rows.map((r) => `<th>${r.method}</th>`).join("") + "</tr>" +
    keys.map((k) => `<tr><td>${k.toUpperCase()}</td>` + rows.map((r) => `<td>${fmt(r[k])}</td>`).join("") + "</tr>").join("");
  table.hidden = false;
}

function setSource(gray, width, height) {
  source = { gray, width, height };
  drawImage($("original"), gray, width, height);
  drawHistogram($("original-hist"), gray);
  $("metrics").hidden = true;
  render();
}

function syntheticScene(width = 256, height = 192) {
  // dim, low-contrast gradient with texture
  const gray = new Uint8Array(width * height);
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      const v = 90 + 25 * (x / width) + 10 * Math.sin(x / 9) * Math.cos(y / 13) + 8 * (y / height);
      gray[y * width + x] = Math.max(0, Math.min(255, Math.round(v)));
    }
  }
  setSource(gray, width, height);
}

async function loadFile(file) {
  const bitmap = await createImageBitmap(file);
  const canvas = new OffscreenCanvas(bitmap.width, bitmap.height);
  const ctx = canvas.getContext("2d");
  ctx.drawImage(bitmap, 0, 0);
  const rgba = ctx.getImageData(0, 0, bitmap.width, bitmap.height).data;
  setSource(rgba_to_gray(new Uint8Array(rgba.buffer)), bitmap.width, bitmap.height);
}

await init();
for (const [id, fmt] of [
  ["depth", (v) => v],
  ["grid", (v) => `${v}x${v}`],
  ["limit", (v) => v],
  ["clip", (v) => (Number(v) > 1 ? v : "off")],
]) {
  $(id).addEventListener("input", () => {
    $(`${id}-out`).textContent = fmt($(id).value);
    render();
  });
}
$("method").addEventListener("change", render);
$("blend").addEventListener("change", render);
$("synthetic").addEventListener("click", () => syntheticScene());
$("compare").addEventListener("click", showComparison);
$("file").addEventListener("change", (e) => e.target.files[0] && loadFile(e.target.files[0]));
syntheticScene();
