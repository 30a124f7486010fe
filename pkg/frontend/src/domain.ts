// Build plan-language domain text from the parameterize dialog's fields.
// The server parses the result, so malformed input fails with a
// diagnostic rather than corrupting the plan.

export type DomainChoice =
  | { kind: "default"; value: string }
  | { kind: "range"; from: string; to: string; step?: string; points?: string }
  | { kind: "select"; mode: "anyof" | "oneof"; values: string[]; defaults?: string[] }
  | { kind: "random"; from: string; to: string; points?: string }
  | { kind: "compute"; expr: string }
  | { kind: "jitp"; command: string };

const IDENT = /^[A-Za-z_][A-Za-z0-9_]*$/;

function quoteValue(text: string): string {
  return '"' + text.replace(/\\/g, "\\\\").replace(/"/g, '\\"') + '"';
}

// Numeric types pass through; text and file values are quoted unless
// they are already bare identifiers.
function renderValue(ptype: string, text: string): string {
  if (ptype === "text" || ptype === "file") {
    return IDENT.test(text) ? text : quoteValue(text);
  }
  return text.trim();
}

export function domainText(ptype: string, choice: DomainChoice): string {
  switch (choice.kind) {
    case "default":
      return `default ${renderValue(ptype, choice.value)}`;
    case "range": {
      let out = `range from ${choice.from.trim()} to ${choice.to.trim()}`;
      if (choice.step) out += ` step ${choice.step.trim()}`;
      else if (choice.points) out += ` points ${choice.points.trim()}`;
      return out;
    }
    case "select": {
      const vals = choice.values.map((v) => renderValue(ptype, v)).join(" ");
      let out = `select ${choice.mode} ${vals}`;
      if (choice.defaults && choice.defaults.length > 0) {
        out += " default " +
          choice.defaults.map((v) => renderValue(ptype, v)).join(" ");
      }
      return out;
    }
    case "random": {
      let out = `random from ${choice.from.trim()} to ${choice.to.trim()}`;
      if (choice.points) out += ` points ${choice.points.trim()}`;
      return out;
    }
    case "compute":
      return `compute ${choice.expr.trim()}`;
    case "jitp":
      return `jitp ${quoteValue(choice.command)}`;
  }
}
