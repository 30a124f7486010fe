// Editor wiring: one Editor instance owns the DOM under a root element
// and talks to the service through an EditorApi.  Tests substitute an
// in-memory EditorApi, so nothing here may touch fetch directly.

import {
  ApiError,
  ComputeResult,
  ParameterizeRequest,
  RevisionConflictError,
  StateInfo,
  byteSpan,
} from "./api.js";
import { DomainChoice, domainText } from "./domain.js";
import { inferType, selectionLiteral } from "./literals.js";
import { diagnosticsList, fileList, jobBadge, paramTable } from "./render.js";

export interface EditorApi {
  state(): Promise<StateInfo>;
  events(since: number, timeout?: number): Promise<number>;
  setPlan(text: string, ifRevision?: number): Promise<number>;
  setSeed(seed: number, ifRevision?: number): Promise<number>;
  parameterize(req: ParameterizeRequest): Promise<number>;
  getFile(name: string): Promise<string>;
  putFile(name: string, text: string, ifRevision?: number): Promise<number>;
  deleteFile(name: string): Promise<number>;
  compute(expr: string): Promise<ComputeResult>;
  save(path: string): Promise<void>;
  open(path: string): Promise<number>;
}

interface PendingTarget {
  file: string;
  start: number;
  end: number;
}

const TEMPLATE = `
<header class="bar">
  <strong>plansweep editor</strong>
  <span class="badge-slot"></span>
  <label>seed <input class="seed-input" size="8"></label>
  <button class="seed-apply">set seed</button>
  <input class="path-input" placeholder="project path" size="24">
  <button class="save-btn">save</button>
  <button class="open-btn">open</button>
  <span class="status"></span>
</header>
<main class="columns">
  <section class="panel plan-panel">
    <h2>plan</h2>
    <textarea class="plan-text" rows="16" spellcheck="false"></textarea>
    <div><button class="plan-apply">apply plan</button></div>
    <div class="diags-slot"></div>
  </section>
  <section class="panel side-panel">
    <h2>parameters</h2>
    <div class="params-slot"></div>
    <div><button class="add-param">add parameter</button></div>
    <h2>files</h2>
    <div class="files-slot"></div>
    <div>
      <input class="attach-name" placeholder="file name" size="16">
      <button class="attach-btn">attach empty</button>
    </div>
    <div class="viewer" hidden>
      <h3 class="viewer-name"></h3>
      <textarea class="viewer-text" rows="10" readonly spellcheck="false"></textarea>
      <div>
        <button class="parameterize-btn">parameterize selection</button>
        <button class="detach-btn">remove file</button>
      </div>
    </div>
  </section>
</main>
<div class="dialog" hidden>
  <h3>new parameter</h3>
  <p class="dialog-target"></p>
  <label>name <input class="dlg-name"></label>
  <label>label <input class="dlg-label"></label>
  <label>type
    <select class="dlg-type">
      <option>integer</option><option>float</option>
      <option>text</option><option>file</option>
    </select>
  </label>
  <label>domain
    <select class="dlg-kind">
      <option>default</option><option>range</option><option>select</option>
      <option>random</option><option>compute</option><option>jitp</option>
    </select>
  </label>
  <div class="dlg-fields">
    <label data-kinds="default">value <input class="dlg-value"></label>
    <label data-kinds="range random">from <input class="dlg-from" size="8"></label>
    <label data-kinds="range random">to <input class="dlg-to" size="8"></label>
    <label data-kinds="range">step <input class="dlg-step" size="8"></label>
    <label data-kinds="range random">points <input class="dlg-points" size="8"></label>
    <label data-kinds="select">mode
      <select class="dlg-mode"><option>anyof</option><option>oneof</option></select>
    </label>
    <label data-kinds="select">values (one per line)
      <textarea class="dlg-values" rows="3"></textarea>
    </label>
    <label data-kinds="select">defaults (one per line)
      <textarea class="dlg-defaults" rows="2"></textarea>
    </label>
    <label data-kinds="compute">expression <input class="dlg-expr"></label>
    <label data-kinds="jitp">command <input class="dlg-command"></label>
  </div>
  <p class="dialog-error"></p>
  <button class="dlg-submit">create</button>
  <button class="dlg-cancel">cancel</button>
</div>
`;

export class Editor {
  private revision = 0;
  private selectedFile: string | null = null;
  private fileText = "";
  private pending: PendingTarget | null = null;
  private polling = false;

  constructor(
    private root: HTMLElement,
    private api: EditorApi,
  ) {
    root.innerHTML = TEMPLATE;
    this.on(".plan-apply", () => this.applyPlan());
    this.on(".seed-apply", () => this.applySeed());
    this.on(".save-btn", () => this.saveProject());
    this.on(".open-btn", () => this.openProject());
    this.on(".attach-btn", () => this.attachFile());
    this.on(".detach-btn", () => this.detachFile());
    this.on(".parameterize-btn", () => this.openDialogForSelection());
    this.on(".add-param", () => this.openDialog(null));
    this.on(".dlg-submit", () => this.submitDialog());
    this.on(".dlg-cancel", () => this.closeDialog());
    this.query<HTMLSelectElement>(".dlg-kind").addEventListener("change", () =>
      this.showDomainFields(),
    );
    this.showDomainFields();
  }

  // ── DOM access ──────────────────────────────────────────────────────

  query<T extends HTMLElement>(selector: string): T {
    const node = this.root.querySelector(selector);
    if (node === null) throw new Error(`missing element ${selector}`);
    return node as T;
  }

  private on(selector: string, handler: () => void): void {
    this.query(selector).addEventListener("click", handler);
  }

  private value(selector: string): string {
    return this.query<HTMLInputElement>(selector).value;
  }

  private setStatus(text: string): void {
    this.query(".status").textContent = text;
  }

  // ── Rendering ───────────────────────────────────────────────────────

  async refresh(): Promise<void> {
    const state = await this.api.state();
    this.render(state);
  }

  private render(state: StateInfo): void {
    this.revision = state.revision;
    const plan = this.query<HTMLTextAreaElement>(".plan-text");
    if (document.activeElement !== plan) plan.value = state.plan_text;
    const seed = this.query<HTMLInputElement>(".seed-input");
    if (document.activeElement !== seed) seed.value = String(state.seed);
    this.swap(".badge-slot", jobBadge(state.job_count, state.job_count_error));
    this.swap(".diags-slot", diagnosticsList(state.diagnostics));
    this.swap(".params-slot", paramTable(state.params));
    if (this.selectedFile !== null && !state.files.includes(this.selectedFile)) {
      this.selectedFile = null;
      this.query(".viewer").hidden = true;
    }
    this.swap(
      ".files-slot",
      fileList(state.files, this.selectedFile, (name) => {
        void this.pickFile(name);
      }),
    );
  }

  private swap(selector: string, node: HTMLElement): void {
    const slot = this.query(selector);
    slot.replaceChildren(node);
  }

  // ── Plan and seed ───────────────────────────────────────────────────

  private async applyPlan(): Promise<void> {
    await this.guarded(async () => {
      await this.api.setPlan(
        this.query<HTMLTextAreaElement>(".plan-text").value,
        this.revision,
      );
      await this.refresh();
      this.setStatus("plan saved");
    });
  }

  private async applySeed(): Promise<void> {
    const raw = this.value(".seed-input").trim();
    const seed = Number(raw);
    if (raw === "" || !Number.isInteger(seed) || seed < 0) {
      this.setStatus(`bad seed "${raw}"`);
      return;
    }
    await this.guarded(async () => {
      await this.api.setSeed(seed, this.revision);
      await this.refresh();
      this.setStatus(`seed set to ${seed}`);
    });
  }

  private async saveProject(): Promise<void> {
    const path = this.value(".path-input").trim();
    if (!path) return this.setStatus("enter a project path");
    await this.guarded(async () => {
      await this.api.save(path);
      this.setStatus(`saved ${path}`);
    });
  }

  private async openProject(): Promise<void> {
    const path = this.value(".path-input").trim();
    if (!path) return this.setStatus("enter a project path");
    await this.guarded(async () => {
      await this.api.open(path);
      await this.refresh();
      this.setStatus(`opened ${path}`);
    });
  }

  // ── Files ───────────────────────────────────────────────────────────

  async pickFile(name: string): Promise<void> {
    await this.guarded(async () => {
      this.fileText = await this.api.getFile(name);
      this.selectedFile = name;
      this.query(".viewer").hidden = false;
      this.query(".viewer-name").textContent = name;
      this.query<HTMLTextAreaElement>(".viewer-text").value = this.fileText;
      await this.refresh();
    });
  }

  private async attachFile(): Promise<void> {
    const name = this.value(".attach-name").trim();
    if (!name) return this.setStatus("enter a file name");
    await this.guarded(async () => {
      await this.api.putFile(name, "", this.revision);
      await this.refresh();
      await this.pickFile(name);
    });
  }

  private async detachFile(): Promise<void> {
    if (this.selectedFile === null) return;
    const name = this.selectedFile;
    await this.guarded(async () => {
      await this.api.deleteFile(name);
      this.selectedFile = null;
      this.query(".viewer").hidden = true;
      await this.refresh();
    });
  }

  // ── Parameterize dialog ─────────────────────────────────────────────

  /** Open the dialog for the literal selected in the file viewer. */
  openDialogForSelection(): void {
    if (this.selectedFile === null) {
      this.setStatus("pick a file first");
      return;
    }
    const viewer = this.query<HTMLTextAreaElement>(".viewer-text");
    const literal = selectionLiteral(
      this.fileText,
      viewer.selectionStart,
      viewer.selectionEnd,
    );
    if (literal === null) {
      this.setStatus("select a value to parameterize");
      return;
    }
    const span = byteSpan(this.fileText, literal.start, literal.end);
    this.openDialog({ file: this.selectedFile, ...span });
    this.query<HTMLSelectElement>(".dlg-type").value = inferType(literal.text);
    this.query<HTMLInputElement>(".dlg-value").value = literal.text;
    this.query(".dialog-target").textContent =
      `replacing "${literal.text}" in ${this.selectedFile}`;
  }

  openDialog(target: PendingTarget | null): void {
    this.pending = target;
    if (target === null) {
      this.query(".dialog-target").textContent = "independent parameter";
    }
    this.query(".dialog-error").textContent = "";
    this.query(".dialog").hidden = false;
  }

  closeDialog(): void {
    this.pending = null;
    this.query(".dialog").hidden = true;
  }

  private domainChoice(): DomainChoice {
    const kind = this.query<HTMLSelectElement>(".dlg-kind").value;
    const lines = (sel: string) =>
      this.query<HTMLTextAreaElement>(sel)
        .value.split("\n")
        .map((s) => s.trim())
        .filter((s) => s.length > 0);
    switch (kind) {
      case "range":
        return {
          kind: "range",
          from: this.value(".dlg-from"),
          to: this.value(".dlg-to"),
          step: this.value(".dlg-step").trim() || undefined,
          points: this.value(".dlg-points").trim() || undefined,
        };
      case "select":
        return {
          kind: "select",
          mode: this.query<HTMLSelectElement>(".dlg-mode").value as
            | "anyof"
            | "oneof",
          values: lines(".dlg-values"),
          defaults: lines(".dlg-defaults"),
        };
      case "random":
        return {
          kind: "random",
          from: this.value(".dlg-from"),
          to: this.value(".dlg-to"),
          points: this.value(".dlg-points").trim() || undefined,
        };
      case "compute":
        return { kind: "compute", expr: this.value(".dlg-expr") };
      case "jitp":
        return { kind: "jitp", command: this.value(".dlg-command") };
      default:
        return { kind: "default", value: this.value(".dlg-value") };
    }
  }

  private showDomainFields(): void {
    const kind = this.query<HTMLSelectElement>(".dlg-kind").value;
    const fields = this.root.querySelectorAll<HTMLElement>(".dlg-fields label");
    for (const field of fields) {
      const kinds = (field.dataset.kinds ?? "").split(" ");
      field.hidden = !kinds.includes(kind);
    }
  }

  async submitDialog(): Promise<void> {
    const name = this.value(".dlg-name").trim();
    const ptype = this.query<HTMLSelectElement>(".dlg-type").value;
    const label = this.value(".dlg-label").trim();
    const req: ParameterizeRequest = {
      name,
      type: ptype,
      domain: domainText(ptype, this.domainChoice()),
      if_revision: this.revision,
    };
    if (label) req.label = label;
    if (this.pending !== null) {
      req.file = this.pending.file;
      req.start = this.pending.start;
      req.end = this.pending.end;
    }
    try {
      await this.api.parameterize(req);
      this.closeDialog();
      if (this.selectedFile !== null) await this.pickFile(this.selectedFile);
      else await this.refresh();
      this.setStatus(`added parameter ${name}`);
    } catch (err) {
      this.query(".dialog-error").textContent = describe(err);
    }
  }

  // ── Error handling and polling ──────────────────────────────────────

  private async guarded(fn: () => Promise<void>): Promise<void> {
    try {
      await fn();
    } catch (err) {
      if (err instanceof RevisionConflictError) {
        this.setStatus("plan changed elsewhere; refreshed");
        await this.refresh();
        return;
      }
      this.setStatus(describe(err));
    }
  }

  /** Long-poll the events endpoint and refresh on every new revision. */
  start(): void {
    if (this.polling) return;
    this.polling = true;
    void this.poll();
  }

  stop(): void {
    this.polling = false;
  }

  private async poll(): Promise<void> {
    while (this.polling) {
      try {
        const revision = await this.api.events(this.revision);
        if (!this.polling) return;
        if (revision > this.revision) await this.refresh();
      } catch {
        // Server restarting or unreachable; retry after a pause.
        await new Promise((resolve) => setTimeout(resolve, 2000));
      }
    }
  }
}

function describe(err: unknown): string {
  if (err instanceof RevisionConflictError) {
    return "plan changed elsewhere";
  }
  if (err instanceof ApiError) {
    const code = err.code ? `${err.code}: ` : "";
    return `${code}${err.message}`;
  }
  return String(err);
}

export function createEditor(root: HTMLElement, api: EditorApi): Editor {
  return new Editor(root, api);
}
