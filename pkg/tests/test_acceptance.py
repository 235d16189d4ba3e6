"""Acceptance suite: each test prints one [PASS]/[FAIL] line (run with -s).

Criteria cover the oracle/property contracts plus desk-scale synthetic
training. Stated runtime budgets are asserted, not aspirational.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import replace

import numpy as np
import pytest
import torch

from oracles import (
    crf_best_path_bruteforce,
    crf_log_partition_bruteforce,
    multiset_f1_oracle,
)
from quoteforge.corpus import generate_triples, write_triples_jsonl
from quoteforge.corpus.types import Book, QuoteRecord
from quoteforge.evaluation import EvalRecord, bow_f1, exact_match, top_n_f1
from quoteforge.pipeline.experiment import ExperimentConfig, split_triples
from quoteforge.reader import (
    EncoderConfig,
    ReaderTrainConfig,
    crf_log_likelihood,
    evaluate_reader,
    path_score,
    span_loss,
    train_reader,
    viterbi_decode,
)
from quoteforge.rerank import (
    OverlapStubBackend,
    make_training_examples,
    rerank,
    sample_hard_negatives,
    yes_score,
)
from quoteforge.retrieval import RankedParagraph, build_index, get_embedder, search_top_k, split_document
from quoteforge.corpus.types import ParagraphRecord, Triple
from quoteforge.synthetic import make_sentinel_corpus
from quoteforge.textnorm import word_tokens


def _conclude(criterion: str, ok: bool, detail: str) -> None:
    print(f"\n[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    assert ok, f"{criterion} failed: {detail}"


# --------------------------------------------------------------------------- A1
def test_a1_crf_oracle() -> None:
    started = time.monotonic()
    rng = np.random.default_rng(101)
    worst_gap = 0.0
    for _ in range(200):
        length = int(rng.integers(1, 7))
        emissions = torch.tensor(rng.normal(size=(length, 3)))
        transitions = torch.tensor(rng.normal(size=(5, 5)))
        labels = [int(x) for x in rng.integers(0, 3, size=length)]

        brute_ll = float(path_score(emissions, transitions, labels)) - crf_log_partition_bruteforce(
            emissions.tolist(), transitions.tolist()
        )
        gap = abs(float(crf_log_likelihood(emissions, transitions, labels)) - brute_ll)
        worst_gap = max(worst_gap, gap)
        assert gap < 1e-8

        best_path, best_score = crf_best_path_bruteforce(emissions.tolist(), transitions.tolist())
        decoded = viterbi_decode(emissions, transitions)
        assert tuple(decoded) == best_path
        assert abs(float(path_score(emissions, transitions, decoded)) - best_score) < 1e-9
    elapsed = time.monotonic() - started
    _conclude(
        "A1 CRF oracle",
        worst_gap < 1e-8 and elapsed < 30,
        f"200 instances, max |ll gap| {worst_gap:.2e}, viterbi == exhaustive argmax, {elapsed:.1f}s",
    )


# --------------------------------------------------------------------------- A2
def _central_diff(func, tensor: torch.Tensor, eps: float = 1e-6) -> torch.Tensor:
    numeric = torch.zeros_like(tensor)
    flat, out = tensor.reshape(-1), numeric.reshape(-1)
    for i in range(flat.numel()):
        original = float(flat[i])
        flat[i] = original + eps
        up = float(func().detach())
        flat[i] = original - eps
        down = float(func().detach())
        flat[i] = original
        out[i] = (up - down) / (2 * eps)
    return numeric


def _max_rel_error(grad: torch.Tensor, numeric: torch.Tensor) -> float:
    scale = torch.maximum(numeric.abs(), grad.abs()).clamp_min(1e-6)
    return float(((grad - numeric).abs() / scale).max())


def test_a2_gradient_checks() -> None:
    started = time.monotonic()
    rng = np.random.default_rng(202)
    length, hidden_size = 6, 8

    hidden = torch.tensor(rng.normal(size=(length, hidden_size)), requires_grad=True)
    start_vec = torch.tensor(rng.normal(size=hidden_size), requires_grad=True)
    end_vec = torch.tensor(rng.normal(size=hidden_size), requires_grad=True)

    def span_objective():
        return span_loss(hidden @ start_vec, hidden @ end_vec, 2, 5)

    span_objective().backward()
    span_errors = [
        _max_rel_error(tensor.grad, _central_diff(span_objective, tensor.detach()))
        for tensor in (hidden, start_vec, end_vec)
    ]

    emissions = torch.tensor(rng.normal(size=(length, 3)), requires_grad=True)
    transitions = torch.tensor(rng.normal(size=(5, 5)), requires_grad=True)
    labels = [0, 1, 1, 2, 0, 2]

    def crf_objective():
        return -crf_log_likelihood(emissions, transitions, labels)

    crf_objective().backward()
    crf_errors = [
        _max_rel_error(tensor.grad, _central_diff(crf_objective, tensor.detach()))
        for tensor in (emissions, transitions)
    ]

    worst = max(span_errors + crf_errors)
    elapsed = time.monotonic() - started
    _conclude(
        "A2 gradient checks",
        worst < 1e-4 and elapsed < 60,
        f"max relative error {worst:.2e} (span {max(span_errors):.2e}, crf {max(crf_errors):.2e}), {elapsed:.1f}s",
    )


# --------------------------------------------------------------------------- A3
@pytest.fixture(scope="module")
def a3_splits():
    corpus = make_sentinel_corpus(n_books=50, paragraphs_per_book=10, seed=7)
    triples, report = corpus.curate()
    assert report.n_triples == 500
    return split_triples(triples, ExperimentConfig(seed=0))


def _a3_config(tagger: str) -> ReaderTrainConfig:
    return ReaderTrainConfig(
        epochs=10, batch_size=8, lr=1e-3, seed=0, max_len=256, tagger=tagger,
        early_stopping_patience=10,
        encoder=EncoderConfig(hidden_size=64, num_layers=2, num_heads=4, ffn_size=128,
                              max_len=256, dropout=0.0),
    )


def test_a3_synthetic_end_to_end_training(a3_splits) -> None:
    started = time.monotonic()
    splits = a3_splits

    multi = train_reader(splits["train"], splits["dev"], _a3_config("crf"))
    multi_dev = evaluate_reader(multi, splits["dev"])

    span_only = train_reader(splits["train"], splits["dev"], _a3_config("none"))
    span_dev = evaluate_reader(span_only, splits["dev"])

    elapsed = time.monotonic() - started
    ablation_gap = (span_dev["bow_f1"] - multi_dev["bow_f1"]) * 100.0
    ok = (
        multi_dev["em"] >= 0.90
        and multi_dev["bow_f1"] >= 0.95
        and ablation_gap <= 2.0
        and elapsed < 15 * 60
    )
    _conclude(
        "A3 synthetic end-to-end training",
        ok,
        f"multi-task dev EM {multi_dev['em']:.3f} / F1 {multi_dev['bow_f1']:.3f}; "
        f"span-only F1 {span_dev['bow_f1']:.3f} (gap {ablation_gap:+.2f} pts); {elapsed:.0f}s",
    )


# --------------------------------------------------------------------------- A4
def test_a4_metric_oracle() -> None:
    pair_score = bow_f1("Money begets money and its offspring", "Money begets money")
    oracle_score = multiset_f1_oracle(
        word_tokens("Money begets money and its offspring"), word_tokens("Money begets money")
    )
    exact_pair_ok = abs(pair_score - 2 / 3) <= 1e-9 and abs(pair_score - oracle_score) <= 1e-15

    rng = np.random.default_rng(404)
    vocab = ["money", "begets", "time", "tide", "waits", "for", "nobody", "gold", "rust"]
    invariant_ok = True
    for _ in range(1000):
        gold_tokens = [vocab[i] for i in rng.integers(0, len(vocab), size=rng.integers(1, 8))]
        gold = " ".join(gold_tokens)
        if rng.random() < 0.3:
            pred = "  ".join(gold_tokens) if rng.random() < 0.5 else gold
        else:
            pred = " ".join(vocab[i] for i in rng.integers(0, len(vocab), size=rng.integers(1, 8)))
        if exact_match(pred, gold) == 1 and bow_f1(pred, gold) != 1.0:
            invariant_ok = False
            break
        extra = [" ".join(vocab[i] for i in rng.integers(0, len(vocab), size=3)) for _ in range(2)]
        record = EvalRecord(gold, (pred, *extra))
        if top_n_f1(record, 3) < top_n_f1(record, 1) - 1e-12:
            invariant_ok = False
            break
    _conclude(
        "A4 metric oracle",
        exact_pair_ok and invariant_ok,
        f"reference pair F1 {pair_score:.9f} == 2/3; EM=>F1 and top3>=top1 held on 1000 random pairs",
    )


# --------------------------------------------------------------------------- A5
def test_a5_retrieval_sanity() -> None:
    corpus = make_sentinel_corpus(n_books=50, paragraphs_per_book=10, seed=5)
    triples, _ = corpus.curate()
    bodies = {book.book_id: book.body for book in corpus.books}

    chunks = []
    for book in corpus.books:
        for chunk in split_document(book.body, book.book_id, 1200, 100):
            chunks.append(replace(chunk, chunk_id=len(chunks)))
    embedder = get_embedder("hash-word", dim=256)
    index = build_index(chunks, embedder)

    hits = 0
    for triple in triples:
        body = bodies[triple.book_id]
        quote_start = body.index(triple.paragraph) + triple.quote_char_start
        quote_end = quote_start + len(triple.quote)
        top = search_top_k(index, embedder.encode([triple.context])[0], k=20)
        if any(
            c.book_id == triple.book_id and c.char_start <= quote_start and c.char_end >= quote_end
            for c in top
        ):
            hits += 1
    recall = hits / len(triples)

    # Re-ranking fixture: the gold paragraph arrives ranked 5th by vector score.
    gold = triples[0]
    decoys = [t.paragraph for t in triples if t.book_id != gold.book_id][:4]
    candidates = [
        RankedParagraph(id=i, score=0.9 - 0.1 * i, text=text) for i, text in enumerate(decoys)
    ]
    candidates.append(RankedParagraph(id=4, score=0.4, text=gold.paragraph))
    p_at_1_before = int(candidates[0].text == gold.paragraph)
    reranked = rerank(candidates, gold.context, OverlapStubBackend())
    p_at_1_after = int(reranked[0].text == gold.paragraph)

    ok = recall >= 0.95 and p_at_1_after > p_at_1_before
    _conclude(
        "A5 retrieval sanity",
        ok,
        f"top-20 gold-chunk recall {recall:.3f} over {len(triples)} contexts; "
        f"stub re-ranking lifts P@1 {p_at_1_before} -> {p_at_1_after} on the rank-5 fixture",
    )


# --------------------------------------------------------------------------- A6
def test_a6_curation_round_trip(tmp_path) -> None:
    def build_inputs():
        corpus = make_sentinel_corpus(n_books=10, paragraphs_per_book=6, seed=13)
        words = [f"w{i}" for i in range(120)]
        straddler = Book("zzz_straddle", "straddle", " ".join(words))
        quotes = list(corpus.quotes)
        # crosses the words 58|60 boundary under segment_length=60
        quotes.append(QuoteRecord(quote_id="straddle", text="w58 w59 w60 w61"))
        return corpus.books + [straddler], quotes, corpus.segment_length

    books, quotes, segment_length = build_inputs()
    triples, report = generate_triples(quotes, books, segment_length)
    round_trip_ok = all(
        t.paragraph[t.quote_char_start : t.quote_char_end] == t.quote for t in triples
    )
    dropped_ok = report.n_boundary_dropped == 1 and all(t.quote_id != "straddle" for t in triples)

    first, second = tmp_path / "run1.jsonl", tmp_path / "run2.jsonl"
    write_triples_jsonl(triples, first)
    books2, quotes2, _ = build_inputs()
    triples2, _ = generate_triples(quotes2, books2, segment_length, workers=4)
    write_triples_jsonl(triples2, second)
    identical = first.read_bytes() == second.read_bytes()

    _conclude(
        "A6 curation round-trip",
        round_trip_ok and dropped_ok and identical,
        f"{len(triples)} triples all offset-exact; straddler dropped and counted "
        f"({report.n_boundary_dropped}); two seeded runs byte-identical={identical}",
    )


# --------------------------------------------------------------------------- A7
def test_a7_yes_score_conformance() -> None:
    rng = np.random.default_rng(707)
    exact_ok = True
    for _ in range(20):
        p_yes, p_no = float(rng.uniform(0, 1)), float(rng.uniform(1e-9, 1))
        if yes_score(p_yes, p_no) != p_yes / (p_yes + p_no):
            exact_ok = False
            break

    monotone_ok = True
    for _ in range(1000):
        p_yes, p_no = float(rng.uniform(0, 1)), float(rng.uniform(1e-9, 1))
        bump = float(rng.uniform(1e-9, 1))
        base = yes_score(p_yes, p_no)
        if not (0.0 <= base <= 1.0):
            monotone_ok = False
            break
        if yes_score(p_yes + bump, p_no) < base or yes_score(p_yes, p_no + bump) > base:
            monotone_ok = False
            break

    _conclude(
        "A7 yes-score conformance",
        exact_ok and monotone_ok,
        "20 random pairs exactly equal p_yes/(p_yes+p_no); monotone under 1000 perturbations",
    )


# --------------------------------------------------------------------------- A8
def _fixture_triple(book_id: str, positive_id: int, n_paragraphs: int) -> tuple[Triple, list[ParagraphRecord]]:
    paragraphs = [
        ParagraphRecord(paragraph_id=i, book_id=book_id, text=f"paragraph {i} filler body", word_count=4)
        for i in range(n_paragraphs)
    ]
    triple = Triple(
        quote_id="q", context_id=0, book_id=book_id, paragraph_id=positive_id,
        context="filler body paragraph", quote="paragraph", paragraph=paragraphs[positive_id].text,
        quote_char_start=0, quote_char_end=9,
    )
    return triple, paragraphs


def test_a8_hard_negative_protocol() -> None:
    # exact example count at the reference setting n=9
    counts_ok = True
    for strategy in ("adjacent", "bm25"):
        for n_paragraphs in (10, 12, 25):
            triple, paragraphs = _fixture_triple("bk", n_paragraphs // 2, n_paragraphs)
            examples, report = make_training_examples(
                [triple], {"bk": paragraphs}, n=9, strategy=strategy
            )
            if len(examples) != 10 or report.n_shortfall != 0:
                counts_ok = False

    rng = np.random.default_rng(808)
    exclusion_ok = True
    for trial in range(500):
        n_paragraphs = int(rng.integers(2, 30))
        positive = int(rng.integers(0, n_paragraphs))
        n = int(rng.integers(1, 13))
        strategy = "adjacent" if trial % 2 == 0 else "bm25"
        triple, paragraphs = _fixture_triple("bk", positive, n_paragraphs)
        picked = sample_hard_negatives(triple, paragraphs, n=n, strategy=strategy)
        ids = [p.paragraph_id for p in picked]
        if positive in ids or len(ids) != len(set(ids)) or len(ids) > n:
            exclusion_ok = False
            break

    _conclude(
        "A8 hard-negative protocol",
        counts_ok and exclusion_ok,
        "n=9 yields exactly 10 examples per triple; positive excluded and no "
        "duplicates in 500 random fixtures under both strategies",
    )
