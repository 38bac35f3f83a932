/**
 * Word-aligned dictionary matching over Unicode scalar values.
 *
 * The wire protocol counts offsets in scalar values (code points), not in
 * UTF-16 code units, so the scan runs on the code-point array of the text.
 * A hit must not touch a letter or digit on either side; at each position
 * the longest name wins and the scan resumes behind it, so the result is
 * ordered and disjoint.
 */

export type EntityClass = "PER" | "ORG" | "LOC";

export interface Entity {
  start: number;
  end: number;
  class: EntityClass;
}

const LETTER_OR_DIGIT = /[\p{L}\p{N}]/u;

interface Pattern {
  points: string[];
  cls: EntityClass;
}

export function compilePatterns(names: Map<string, EntityClass>): Pattern[] {
  const patterns: Pattern[] = [];
  for (const [name, cls] of names) {
    const points = Array.from(name);
    if (points.length > 0) patterns.push({ points, cls });
  }
  return patterns;
}

export function findEntities(
  text: string,
  names: Map<string, EntityClass> | Pattern[],
): Entity[] {
  const patterns = Array.isArray(names) ? names : compilePatterns(names);
  if (patterns.length === 0 || text.length === 0) return [];
  const points = Array.from(text);
  const out: Entity[] = [];
  let cursor = 0;
  while (cursor < points.length) {
    let best: Entity | null = null;
    for (let start = cursor; start < points.length; start++) {
      for (const pattern of patterns) {
        const end = start + pattern.points.length;
        if (end > points.length) continue;
        if (best && end <= best.end) continue;
        let matches = true;
        for (let k = 0; k < pattern.points.length; k++) {
          if (points[start + k] !== pattern.points[k]) {
            matches = false;
            break;
          }
        }
        if (!matches) continue;
        if (start > 0 && LETTER_OR_DIGIT.test(points[start - 1])) continue;
        if (end < points.length && LETTER_OR_DIGIT.test(points[end])) continue;
        best = { start, end, class: pattern.cls };
      }
      if (best) break; // leftmost start wins; longest already chosen there
    }
    if (!best) break;
    out.push(best);
    cursor = best.end;
  }
  return out;
}
