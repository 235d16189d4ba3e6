// DOM wiring for the search console. State lives in SearchController; this
// file only reads state and paints.

import { ApiClient } from './api';
import { renderHighlight } from './highlight';
import { SearchController, canSubmit, resultCards } from './state';
import type { SearchState } from './types';

const api = new ApiClient();

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

async function showDocument(state: SearchState): Promise<void> {
  const viewer = element<HTMLDivElement>('document-view');
  const heading = element<HTMLHeadingElement>('document-title');
  if (state.selectedIndex === null) {
    heading.textContent = '';
    viewer.textContent = '';
    return;
  }
  const result = state.results[state.selectedIndex];
  try {
    const doc = await api.getDocument(result.book_id);
    heading.textContent = doc.title;
    renderHighlight(viewer, doc.text, result.char_start, result.char_end);
    viewer.querySelector('mark')?.scrollIntoView({ block: 'center' });
  } catch (error) {
    heading.textContent = result.book_id;
    viewer.textContent = `could not load document: ${error}`;
  }
}

function paint(state: SearchState, controller: SearchController): void {
  element<HTMLButtonElement>('search-button').disabled = !canSubmit(state) || state.searching;

  const banner = element<HTMLDivElement>('error-banner');
  banner.hidden = state.error === null;
  banner.textContent = state.error ?? '';

  const list = element<HTMLUListElement>('results');
  list.textContent = '';
  for (const card of resultCards(state)) {
    const item = document.createElement('li');
    item.className = card.selected ? 'result selected' : 'result';
    const quote = document.createElement('blockquote');
    quote.textContent = card.text;
    const meta = document.createElement('small');
    meta.textContent =
      `#${card.rank} · ${card.bookId} · relevance ${card.rerankScore.toFixed(3)} · span score ${card.score.toFixed(2)}`;
    item.append(quote, meta);
    item.addEventListener('click', () => {
      controller.selectResult(card.rank - 1);
    });
    list.appendChild(item);
  }

  void showDocument(state);
  const params = new URLSearchParams();
  if (state.query) params.set('q', state.query);
  if (state.documentFilter) params.set('doc', state.documentFilter);
  history.replaceState(null, '', params.size > 0 ? `?${params}` : location.pathname);
}

export function start(): void {
  const controller: SearchController = new SearchController(api, (state) => paint(state, controller));

  const queryInput = element<HTMLInputElement>('query');
  const filterInput = element<HTMLInputElement>('document-filter');
  const params = new URLSearchParams(location.search);
  if (params.get('q')) {
    queryInput.value = params.get('q') as string;
    controller.setQuery(queryInput.value);
  }
  if (params.get('doc')) {
    filterInput.value = params.get('doc') as string;
    controller.setDocumentFilter(filterInput.value);
  }

  queryInput.addEventListener('input', () => controller.setQuery(queryInput.value));
  filterInput.addEventListener('input', () =>
    controller.setDocumentFilter(filterInput.value.trim() || null),
  );
  element<HTMLFormElement>('search-form').addEventListener('submit', (event) => {
    event.preventDefault();
    void controller.submitSearch();
  });

  void api.health().then((ok) => {
    if (!ok) paint({ ...controller.current(), error: 'service unreachable' }, controller);
  });
}

if (typeof document !== 'undefined' && document.getElementById('search-form')) {
  start();
}
