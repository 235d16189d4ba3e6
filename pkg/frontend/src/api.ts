import type { DocumentResponse, SearchResponse } from './types';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/**
 * Thin client over the search service. `fetchImpl` is injectable so tests can
 * run against a stub server.
 */
export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async search(context: string, documentId: string | null, topK?: number): Promise<SearchResponse> {
    const body: Record<string, unknown> = { context };
    if (documentId) body.document_id = documentId;
    if (topK !== undefined) body.top_k = topK;
    const response = await this.fetchImpl(`${this.baseUrl}/api/search`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      throw new Error(`search failed: ${response.status}`);
    }
    return (await response.json()) as SearchResponse;
  }

  async getDocument(documentId: string): Promise<DocumentResponse> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/documents/${encodeURIComponent(documentId)}`);
    if (!response.ok) {
      throw new Error(`document fetch failed: ${response.status}`);
    }
    return (await response.json()) as DocumentResponse;
  }

  async health(): Promise<boolean> {
    try {
      const response = await this.fetchImpl(`${this.baseUrl}/api/health`);
      return response.ok;
    } catch {
      return false;
    }
  }
}
