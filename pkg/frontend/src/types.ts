// Mirrors of the service's JSON contract. The UI treats all of these as
// immutable: state transitions copy, never mutate.

export interface SearchResult {
  text: string;
  score: number;
  rerank_score: number;
  paragraph_id: number;
  char_start: number;
  char_end: number;
  book_id: string;
}

export interface SearchResponse {
  results: SearchResult[];
}

export interface DocumentResponse {
  title: string;
  text: string;
}

export interface SearchState {
  query: string;
  documentFilter: string | null;
  results: readonly SearchResult[];
  selectedIndex: number | null;
  searching: boolean;
  error: string | null;
}
