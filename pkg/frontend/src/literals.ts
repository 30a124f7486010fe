// Locate the literal under a cursor or selection in attached file text.
// Offsets here are JavaScript character indices; convert with byteSpan
// from api.ts before talking to the server.

export interface Literal {
  start: number;
  end: number;
  text: string;
}

// Numbers (sign, decimals, exponent) or identifier-like words.
const TOKEN =
  /-?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?|[A-Za-z_][A-Za-z0-9_]*/g;

const NUMBER = /^-?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?$/;
const INTEGER = /^-?\d+$/;

/** The token containing charIndex, if any.  A cursor sitting on either
 *  edge of a token counts as inside it. */
export function literalAt(text: string, charIndex: number): Literal | null {
  TOKEN.lastIndex = 0;
  let m: RegExpExecArray | null;
  while ((m = TOKEN.exec(text)) !== null) {
    const start = m.index;
    const end = start + m[0].length;
    if (start > charIndex) break;
    if (charIndex <= end) return { start, end, text: m[0] };
  }
  return null;
}

/** For an explicit selection keep its trimmed extent; for a bare cursor
 *  fall back to the token under it. */
export function selectionLiteral(
  text: string,
  charStart: number,
  charEnd: number,
): Literal | null {
  if (charStart === charEnd) return literalAt(text, charStart);
  let start = charStart;
  let end = charEnd;
  while (start < end && /\s/.test(text[start])) start += 1;
  while (end > start && /\s/.test(text[end - 1])) end -= 1;
  if (start === end) return null;
  return { start, end, text: text.slice(start, end) };
}

/** Suggested parameter type for a literal's text. */
export function inferType(text: string): "integer" | "float" | "text" {
  if (INTEGER.test(text)) return "integer";
  if (NUMBER.test(text)) return "float";
  return "text";
}
