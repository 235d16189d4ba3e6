import type { ApiClient } from './api';
import type { SearchResult, SearchState } from './types';

// All transitions are pure: (state, event) -> new state. Server data is
// copied into fresh state objects and never mutated.

export function initialState(): SearchState {
  return {
    query: '',
    documentFilter: null,
    results: [],
    selectedIndex: null,
    searching: false,
    error: null,
  };
}

export function setQuery(state: SearchState, query: string): SearchState {
  return { ...state, query };
}

export function setDocumentFilter(state: SearchState, documentFilter: string | null): SearchState {
  return { ...state, documentFilter };
}

export function canSubmit(state: SearchState): boolean {
  return state.query.trim().length > 0;
}

export function searchStarted(state: SearchState): SearchState {
  return { ...state, searching: true, error: null };
}

export function searchSucceeded(state: SearchState, results: SearchResult[]): SearchState {
  return {
    ...state,
    searching: false,
    error: null,
    results: [...results],
    selectedIndex: results.length > 0 ? 0 : null,
  };
}

export function searchFailed(state: SearchState, message: string): SearchState {
  // previous results stay on screen; only the banner changes
  return { ...state, searching: false, error: message };
}

export function selectResult(state: SearchState, index: number): SearchState {
  if (index < 0 || index >= state.results.length) {
    return state;
  }
  return { ...state, selectedIndex: index };
}

export interface ResultCard {
  rank: number;
  text: string;
  score: number;
  rerankScore: number;
  bookId: string;
  selected: boolean;
}

/** View models for the result list; one card per server result, in rank order. */
export function resultCards(state: SearchState): ResultCard[] {
  return state.results.map((result, index) => ({
    rank: index + 1,
    text: result.text,
    score: result.score,
    rerankScore: result.rerank_score,
    bookId: result.book_id,
    selected: index === state.selectedIndex,
  }));
}

export type StateListener = (state: SearchState) => void;

/**
 * Holds the current state and runs searches. Only the newest in-flight
 * request may land: responses carrying a stale token are dropped.
 */
export class SearchController {
  private state: SearchState = initialState();
  private requestToken = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: StateListener = () => {},
  ) {}

  current(): SearchState {
    return this.state;
  }

  private apply(next: SearchState): void {
    this.state = next;
    this.onChange(next);
  }

  setQuery(query: string): void {
    this.apply(setQuery(this.state, query));
  }

  setDocumentFilter(documentFilter: string | null): void {
    this.apply(setDocumentFilter(this.state, documentFilter));
  }

  selectResult(index: number): void {
    this.apply(selectResult(this.state, index));
  }

  async submitSearch(): Promise<SearchState> {
    if (!canSubmit(this.state)) {
      return this.state;
    }
    const token = ++this.requestToken;
    this.apply(searchStarted(this.state));
    try {
      const response = await this.api.search(this.state.query, this.state.documentFilter);
      if (token === this.requestToken) {
        this.apply(searchSucceeded(this.state, response.results));
      }
    } catch (error) {
      if (token === this.requestToken) {
        this.apply(searchFailed(this.state, error instanceof Error ? error.message : String(error)));
      }
    }
    return this.state;
  }
}
