"""Command-line umbrella for curation, indexing, training, evaluation, and serving."""

from __future__ import annotations

import json
import logging
from dataclasses import replace
from pathlib import Path

import click

from quoteforge.pipeline.config import PipelineConfig

logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")


def _config(ctx: click.Context, **overrides) -> PipelineConfig:
    path = ctx.obj.get("config")
    seed = ctx.obj.get("seed")
    if seed is not None:
        overrides.setdefault("seed", seed)
    if path:
        return PipelineConfig.from_file(path, **overrides)
    return PipelineConfig().merged(**overrides)


def _read_text_arg(value: str) -> str:
    """A leading @ reads the value from a file, else it is taken literally."""
    if value.startswith("@"):
        return Path(value[1:]).read_text(encoding="utf-8")
    return value


@click.group()
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Pipeline config JSON; flags override file values.")
@click.option("--seed", type=int, default=None, help="Global random seed override.")
@click.pass_context
def main(ctx: click.Context, config: str | None, seed: int | None) -> None:
    ctx.ensure_object(dict)
    ctx.obj["config"] = config
    ctx.obj["seed"] = seed


@main.command()
@click.option("--quotes", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--corpus", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--segment-length", type=int, default=None)
@click.option("--window", type=int, default=None)
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.option("--workers", type=int, default=1)
@click.option("--paraphraser", default="identity", show_default=True)
@click.pass_context
def curate(ctx, quotes, corpus, segment_length, window, out, workers, paraphraser):
    """Generate quote-context-paragraph triples from a corpus directory."""
    from quoteforge.corpus import (
        generate_triples,
        get_paraphraser,
        load_corpus_dir,
        load_quotes_file,
        paraphrase_triples,
        write_triples_jsonl,
    )

    config = _config(ctx, segment_length=segment_length, context_window=window)
    books = load_corpus_dir(corpus)
    quote_records = load_quotes_file(quotes)
    triples, report = generate_triples(
        quote_records, books, config.segment_length, config.context_window, workers=workers
    )
    if paraphraser != "identity":
        triples, mean_overlap = paraphrase_triples(triples, get_paraphraser(paraphraser))
        report.paraphraser = paraphraser
        report.mean_paraphrase_overlap = mean_overlap
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_triples_jsonl(triples, out_dir / "triples.jsonl")
    (out_dir / "curation_report.json").write_text(
        json.dumps(report.to_dict(), indent=2), encoding="utf-8"
    )
    click.echo(f"wrote {len(triples)} triples to {out_dir / 'triples.jsonl'}")


@main.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--chunk-size", type=int, default=None)
@click.option("--chunk-overlap", type=int, default=None)
@click.option("--backend", default=None)
@click.option("--dim", type=int, default=None)
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.option("--workers", type=int, default=1)
@click.pass_context
def index(ctx, corpus, chunk_size, chunk_overlap, backend, dim, out, workers):
    """Chunk and embed a corpus directory into a persisted vector index."""
    from quoteforge.corpus import load_corpus_dir
    from quoteforge.retrieval import build_index, get_embedder, split_document

    config = _config(
        ctx, chunk_size=chunk_size, chunk_overlap=chunk_overlap,
        embedder=backend, embedder_dim=dim,
    )
    chunks = []
    documents = []
    for book in load_corpus_dir(corpus):
        book_chunks = split_document(book.body, book.book_id, config.chunk_size, config.chunk_overlap)
        # chunk ids are global row numbers in the persisted index
        for chunk in book_chunks:
            chunks.append(replace(chunk, chunk_id=len(chunks)))
        documents.append({"book_id": book.book_id, "title": book.title, "text": book.body})
    embedder = get_embedder(config.embedder, dim=config.embedder_dim)
    vector_index = build_index(chunks, embedder, workers=workers)
    out_dir = Path(out)
    vector_index.save(out_dir / "index")
    with open(out_dir / "documents.jsonl", "w", encoding="utf-8") as fh:
        for record in documents:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    (out_dir / "config.json").write_text(json.dumps(config.to_dict(), indent=2), encoding="utf-8")
    click.echo(f"indexed {len(chunks)} chunks from {len(documents)} documents into {out_dir}")


@main.command()
@click.option("--index", "index_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--context", required=True, help="Query text, or @file to read it.")
@click.option("--k", type=int, default=None)
@click.pass_context
def retrieve(ctx, index_dir, context, k):
    """First-stage vector search against a persisted index."""
    from quoteforge.retrieval import VectorIndex, get_embedder, search_top_k

    root = Path(index_dir)
    config_file = root / "config.json"
    config = PipelineConfig.from_file(config_file) if config_file.is_file() else _config(ctx)
    vector_index = VectorIndex.load(root / "index" if (root / "index").is_dir() else root)
    embedder = get_embedder(config.embedder, dim=config.embedder_dim)
    query = embedder.encode([_read_text_arg(context)])[0]
    for hit in search_top_k(vector_index, query, k or config.first_stage_k):
        click.echo(json.dumps({"id": hit.id, "score": round(hit.score, 4),
                               "book_id": hit.book_id, "text": hit.text[:100]}))


@main.command("train-reranker")
@click.option("--triples", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--corpus", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--negatives", type=int, default=None)
@click.option("--strategy", type=click.Choice(["bm25", "adjacent"]), default=None)
@click.option("--backend", default="logistic-overlap", show_default=True)
@click.option("--epochs", type=int, default=200, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Where to save the trained backend weights (JSON).")
@click.pass_context
def train_reranker_cmd(ctx, triples, corpus, negatives, strategy, backend, epochs, out):
    """Build hard-negative examples and fit a relevance-scoring backend."""
    from quoteforge.corpus import load_corpus_dir, read_triples_jsonl, segment_book
    from quoteforge.corpus.types import Book
    from quoteforge.rerank import RerankTrainConfig, get_reranker_backend, make_training_examples, train_reranker
    from quoteforge.textnorm import normalize_text

    config = _config(ctx, negatives=negatives, negative_strategy=strategy)
    records = read_triples_jsonl(triples)
    paragraphs_by_book = {}
    for book in load_corpus_dir(corpus):
        normalized = Book(book.book_id, book.title, normalize_text(book.body))
        paragraphs_by_book[book.book_id] = segment_book(normalized, config.segment_length)
    examples, report = make_training_examples(
        records, paragraphs_by_book, n=config.negatives, strategy=config.negative_strategy
    )
    handle = train_reranker(
        examples, get_reranker_backend(backend), RerankTrainConfig(epochs=epochs, seed=config.seed)
    )
    click.echo(
        f"trained {backend} on {report.n_examples} examples "
        f"({report.n_positive} positive, {report.n_shortfall} with a negative shortfall)"
    )
    if out and hasattr(handle, "weights"):
        Path(out).write_text(
            json.dumps({"weights": list(handle.weights), "bias": handle.bias}), encoding="utf-8"
        )
        click.echo(f"saved weights to {out}")


@main.command("rerank")
@click.option("--context", required=True, help="Query text, or @file to read it.")
@click.option("--candidates", required=True, type=click.Path(exists=True, dir_okay=False),
              help="JSONL of {id, text, score} candidates in first-stage order.")
@click.option("--backend", default="overlap-stub", show_default=True)
@click.pass_context
def rerank_cmd(ctx, context, candidates, backend):
    """Re-rank first-stage candidates by yes-score."""
    from quoteforge.rerank import get_reranker_backend, rerank
    from quoteforge.retrieval import RankedParagraph

    items = []
    with open(candidates, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                record = json.loads(line)
                items.append(RankedParagraph(id=record["id"], score=record.get("score", 0.0),
                                             text=record["text"]))
    for item in rerank(items, _read_text_arg(context), get_reranker_backend(backend)):
        click.echo(json.dumps({"id": item.id, "rerank_score": round(item.rerank_score, 4),
                               "score": round(item.score, 4), "text": item.text[:100]}))


@main.command("train-reader")
@click.option("--triples", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--encoder", default="toy-transformer", show_default=True)
@click.option("--epochs", type=int, default=10, show_default=True)
@click.option("--batch-size", type=int, default=4, show_default=True)
@click.option("--lr", type=float, default=2e-5, show_default=True)
@click.option("--hidden-size", type=int, default=64, show_default=True)
@click.option("--dev-fraction", type=float, default=0.1, show_default=True)
@click.option("--tagger", type=click.Choice(["crf", "softmax", "none"]), default="crf",
              show_default=True)
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.pass_context
def train_reader_cmd(ctx, triples, encoder, epochs, batch_size, lr, hidden_size,
                     dev_fraction, tagger, out):
    """Train the multi-task reader and save a checkpoint."""
    from quoteforge.corpus import read_triples_jsonl
    from quoteforge.reader import EncoderConfig, ReaderTrainConfig, save_reader, train_reader

    config = _config(ctx)
    records = read_triples_jsonl(triples)
    n_dev = int(len(records) * dev_fraction)
    dev, train = records[:n_dev], records[n_dev:]
    reader = train_reader(
        train,
        dev,
        ReaderTrainConfig(
            epochs=epochs, batch_size=batch_size, lr=lr, seed=config.seed,
            max_len=config.max_len, tagger=tagger,
            encoder=EncoderConfig(backend=encoder, hidden_size=hidden_size,
                                  max_len=config.max_len),
        ),
    )
    save_reader(reader, out)
    last = reader.history[-1] if reader.history else {}
    click.echo(f"saved reader checkpoint to {out}; last epoch: {last}")


@main.command()
@click.option("--base", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--triples", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--samples", type=int, default=8, show_default=True)
@click.option("--lr", type=float, default=1e-5, show_default=True)
@click.option("--epochs", type=int, default=10, show_default=True)
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.pass_context
def fewshot(ctx, base, triples, samples, lr, epochs, out):
    """Continue fine-tuning a saved reader on a few target-domain samples."""
    from quoteforge.corpus import read_triples_jsonl
    from quoteforge.pipeline.experiment import ExperimentConfig, split_triples
    from quoteforge.reader import fewshot_finetune, load_reader, save_reader

    config = _config(ctx)
    records = read_triples_jsonl(triples)
    splits = split_triples(
        records,
        ExperimentConfig(mode="fewshot", fewshot_samples=samples, seed=config.seed),
    )
    reader = fewshot_finetune(load_reader(base), splits["train"], lr=lr, epochs=epochs,
                              seed=config.seed)
    save_reader(reader, out)
    click.echo(f"few-shot tuned on {samples} samples; checkpoint at {out}")


@main.command()
@click.option("--ckpt", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--context", required=True, help="Query text, or @file to read it.")
@click.option("--paragraph", required=True, help="Paragraph text, or @file to read it.")
@click.option("--top-k", type=int, default=5, show_default=True)
def predict(ckpt, context, paragraph, top_k):
    """Predict quotable spans from one (context, paragraph) pair."""
    from quoteforge.reader import load_reader

    reader = load_reader(ckpt)
    spans = reader.predict(_read_text_arg(context), _read_text_arg(paragraph), top_k=top_k)
    for span in spans:
        click.echo(json.dumps({"text": span.text, "score": round(span.score, 4),
                               "char_start": span.char_start, "char_end": span.char_end}))


@main.command()
@click.option("--predictions", required=True, type=click.Path(exists=True, dir_okay=False),
              help="JSONL of {context_id, spans, paragraph_ids} records.")
@click.option("--gold", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--report", required=True, type=click.Path(dir_okay=False))
def evaluate(predictions, gold, report):
    """Score span predictions against gold triples.

    Prediction records may carry "relevance": [0/1, ...] human judgments of
    the top spans; when present, MAP@5 is reported as well.
    """
    from quoteforge.corpus import read_triples_jsonl
    from quoteforge.evaluation import EvalRecord, macro_scores, map_at_5

    gold_by_id = {t.context_id: t for t in read_triples_jsonl(gold)}
    records = []
    relevance_lists = []
    with open(predictions, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            raw = json.loads(line)
            triple = gold_by_id.get(raw["context_id"])
            if triple is None:
                raise click.ClickException(f"prediction for unknown context_id {raw['context_id']}")
            records.append(
                EvalRecord(
                    gold_quote=triple.quote,
                    predictions=tuple(raw.get("spans", [])),
                    gold_paragraph_id=triple.paragraph_id,
                    predicted_paragraph_ids=tuple(raw.get("paragraph_ids", [])),
                )
            )
            if "relevance" in raw:
                relevance_lists.append(raw["relevance"])
    metrics = macro_scores(records)
    if relevance_lists:
        metrics.map_at_5 = map_at_5(relevance_lists)
    Path(report).write_text(json.dumps(metrics.to_dict(), indent=2), encoding="utf-8")
    click.echo(json.dumps(metrics.to_dict(), indent=2))


@main.command()
@click.option("--triples", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.option("--mode", type=click.Choice(["ratio", "fewshot"]), default="ratio", show_default=True)
@click.option("--samples", type=int, default=8, show_default=True)
@click.option("--base", type=click.Path(exists=True, file_okay=False), default=None,
              help="Base checkpoint for fewshot mode.")
@click.option("--epochs", type=int, default=10, show_default=True)
@click.option("--lr", type=float, default=2e-5, show_default=True)
@click.option("--tagger", type=click.Choice(["crf", "softmax", "none"]), default="crf",
              show_default=True)
@click.option("--corpus", type=click.Path(exists=True, file_okay=False), default=None,
              help="Raw corpus dir; enables end-to-end retrieval scoring of the test split.")
@click.pass_context
def experiment(ctx, triples, out, mode, samples, base, epochs, lr, tagger, corpus):
    """Split, train, and evaluate; writes report.json under --out."""
    from quoteforge.corpus import load_corpus_dir, read_triples_jsonl
    from quoteforge.pipeline.experiment import ExperimentConfig, run_experiment
    from quoteforge.reader import ReaderTrainConfig

    config = _config(ctx)
    records = read_triples_jsonl(triples)
    experiment_config = ExperimentConfig(
        mode=mode,
        fewshot_samples=samples,
        base_checkpoint=base,
        seed=config.seed,
        reader=ReaderTrainConfig(epochs=epochs, lr=lr, seed=config.seed, tagger=tagger,
                                 max_len=config.max_len),
    )
    books = load_corpus_dir(corpus) if corpus else None
    report = run_experiment(records, experiment_config, out, books=books, pipeline_config=config)
    click.echo(json.dumps(report["scores"], indent=2))


@main.command()
@click.option("--artifacts", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(artifacts, host, port):
    """Run the HTTP search service over a built artifact directory."""
    from quoteforge.pipeline.service import serve as run_service

    run_service(artifacts, host=host, port=port)


if __name__ == "__main__":
    main()
