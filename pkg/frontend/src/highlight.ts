// Span highlighting. Segmentation is a pure function so the invariant
// "highlighted text equals the span text byte-for-byte" is testable without
// a DOM; the DOM applier below just renders the segments.

export interface HighlightSegment {
  text: string;
  highlighted: boolean;
}

export function isValidSpan(text: string, charStart: number, charEnd: number): boolean {
  return (
    Number.isInteger(charStart) &&
    Number.isInteger(charEnd) &&
    charStart >= 0 &&
    charEnd >= charStart &&
    charEnd <= text.length
  );
}

/**
 * Split the document into at most three segments with exactly
 * [charStart, charEnd) highlighted. Invalid offsets yield the whole document
 * unhighlighted (with a console warning); a zero-length span highlights
 * nothing.
 */
export function computeHighlightSegments(
  text: string,
  charStart: number,
  charEnd: number,
): HighlightSegment[] {
  if (!isValidSpan(text, charStart, charEnd)) {
    console.warn(`invalid highlight span [${charStart}, ${charEnd}) for document of length ${text.length}`);
    return text.length > 0 ? [{ text, highlighted: false }] : [];
  }
  const segments: HighlightSegment[] = [];
  if (charStart > 0) {
    segments.push({ text: text.slice(0, charStart), highlighted: false });
  }
  if (charEnd > charStart) {
    segments.push({ text: text.slice(charStart, charEnd), highlighted: true });
  }
  if (charEnd < text.length) {
    segments.push({ text: text.slice(charEnd), highlighted: false });
  }
  return segments;
}

export function highlightedText(segments: HighlightSegment[]): string {
  return segments.filter((s) => s.highlighted).map((s) => s.text).join('');
}

/** Render the document into `container` with the span wrapped in <mark>. */
export function renderHighlight(
  container: HTMLElement,
  text: string,
  charStart: number,
  charEnd: number,
): void {
  container.textContent = '';
  for (const segment of computeHighlightSegments(text, charStart, charEnd)) {
    if (segment.highlighted) {
      const mark = document.createElement('mark');
      mark.className = 'quote-highlight';
      mark.textContent = segment.text;
      container.appendChild(mark);
    } else {
      container.appendChild(document.createTextNode(segment.text));
    }
  }
}
