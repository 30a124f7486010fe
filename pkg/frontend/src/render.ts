// Pure DOM builders for the editor panels.  Each returns a detached
// element; the caller swaps it into place.  Keeping these free of
// state and fetch makes them directly testable under jsdom.

import { DiagnosticInfo, ParamInfo } from "./api.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** "2000 jobs", "1 job", or the error message when no count exists. */
export function jobBadge(
  count: number | null,
  error: string | null,
): HTMLElement {
  if (count !== null) {
    const word = count === 1 ? "job" : "jobs";
    return el("span", "job-badge ok", `${count} ${word}`);
  }
  return el("span", "job-badge bad", error ?? "no job count");
}

export function diagnosticsList(diags: DiagnosticInfo[]): HTMLElement {
  const list = el("ul", "diagnostics");
  if (diags.length === 0) {
    list.appendChild(el("li", "diag-clean", "no problems"));
    return list;
  }
  for (const d of diags) {
    const where = d.line !== null ? `${d.line}:${d.col}: ` : "";
    const item = el(
      "li",
      `diag-${d.severity}`,
      `${where}${d.severity} ${d.code}: ${d.message}`,
    );
    list.appendChild(item);
  }
  return list;
}

export function paramTable(params: ParamInfo[]): HTMLElement {
  const table = el("table", "params");
  const head = el("tr");
  for (const title of ["name", "type", "domain", "values", "preview"]) {
    head.appendChild(el("th", undefined, title));
  }
  table.appendChild(head);
  for (const p of params) {
    const row = el("tr");
    row.dataset.name = p.name;
    const name = el("td", undefined, p.label ? `${p.name} (${p.label})` : p.name);
    if (p.origin === "file_dependent") name.classList.add("from-file");
    row.appendChild(name);
    row.appendChild(el("td", undefined, p.type));
    row.appendChild(el("td", undefined, p.kind));
    row.appendChild(
      el("td", undefined, p.cardinality === null ? "?" : String(p.cardinality)),
    );
    const preview = p.preview === null ? "" : p.preview.join(" ");
    row.appendChild(el("td", "preview", preview));
    table.appendChild(row);
  }
  return table;
}

export function fileList(
  names: string[],
  selected: string | null,
  onPick: (name: string) => void,
): HTMLElement {
  const list = el("ul", "files");
  for (const name of names) {
    const item = el("li", undefined, name);
    if (name === selected) item.classList.add("selected");
    item.addEventListener("click", () => onPick(name));
    list.appendChild(item);
  }
  if (names.length === 0) list.appendChild(el("li", "diag-clean", "no files"));
  return list;
}
