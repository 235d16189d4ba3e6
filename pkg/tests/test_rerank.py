from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quoteforge.corpus.types import ParagraphRecord, Triple
from quoteforge.rerank import (
    LogisticOverlapBackend,
    OverlapStubBackend,
    PROMPT_TEMPLATE,
    RerankTrainConfig,
    build_prompt,
    get_reranker_backend,
    make_training_examples,
    parse_prompt,
    rerank,
    sample_hard_negatives,
    train_reranker,
    yes_score,
)
from quoteforge.rerank.backends import dev_precision_at_1
from quoteforge.retrieval import RankedParagraph

SAFE_TEXT = st.text(alphabet=st.characters(blacklist_characters="\n"), max_size=40)


class TestPrompt:
    def test_template_bytes(self) -> None:
        assert (
            build_prompt("x", "y").rendered
            == "Context: x\nDocument: y\nIs the document relevant to the context? Answer yes/no: "
        )

    def test_empty_context_slot_is_valid(self) -> None:
        rendered = build_prompt("", "doc text").rendered
        assert rendered.startswith("Context: \nDocument: doc text\n")

    def test_multiline_document_preserved(self) -> None:
        prompt = build_prompt("c", "line one\nline two")
        assert "line one\nline two" in prompt.rendered
        assert parse_prompt(prompt.rendered) == ("c", "line one\nline two")

    def test_template_constant_matches_builder(self) -> None:
        assert PROMPT_TEMPLATE.format(c="a", d="b") == build_prompt("a", "b").rendered

    @settings(max_examples=100)
    @given(context=SAFE_TEXT, document=st.text(max_size=40))
    def test_round_trip(self, context, document) -> None:
        rendered = build_prompt(context, document).rendered
        assert parse_prompt(rendered) == (context, document)

    def test_parse_rejects_non_prompt(self) -> None:
        with pytest.raises(ValueError):
            parse_prompt("not a prompt")


class TestYesScore:
    def test_eq1_arithmetic(self) -> None:
        assert yes_score(0.3, 0.1) == pytest.approx(0.75)

    def test_symmetry_gives_half(self) -> None:
        for x in (1e-6, 0.25, 0.5, 3.0):
            assert yes_score(x, x) == 0.5

    def test_zero_no_mass_gives_one(self) -> None:
        assert yes_score(0.2, 0.0) == 1.0

    def test_both_zero_defined_as_half(self) -> None:
        assert yes_score(0.0, 0.0) == 0.5

    def test_negative_probability_rejected(self) -> None:
        with pytest.raises(ValueError):
            yes_score(-0.1, 0.5)

    @settings(max_examples=200)
    @given(
        p_yes=st.floats(0, 1, allow_nan=False),
        p_no=st.floats(1e-9, 1, allow_nan=False),
        bump=st.floats(1e-9, 1, allow_nan=False),
    )
    def test_monotone_in_both_arguments(self, p_yes, p_no, bump) -> None:
        base = yes_score(p_yes, p_no)
        assert 0.0 <= base <= 1.0
        assert yes_score(p_yes + bump, p_no) >= base
        assert yes_score(p_yes, p_no + bump) <= base


def _para(pid: int, text: str) -> ParagraphRecord:
    return ParagraphRecord(paragraph_id=pid, book_id="bk", text=text, word_count=len(text.split()))


def _triple(paragraph_id: int, context: str = "ctx words", paragraph: str = "para words") -> Triple:
    return Triple(
        quote_id="q0", context_id=paragraph_id, book_id="bk", paragraph_id=paragraph_id,
        context=context, quote="para", paragraph=paragraph, quote_char_start=0, quote_char_end=4,
    )


class TestHardNegatives:
    def test_adjacent_alternates_after_before(self) -> None:
        paragraphs = [_para(i, f"p{i} words") for i in range(11)]
        picked = sample_hard_negatives(_triple(5), paragraphs, n=4, strategy="adjacent")
        assert [p.paragraph_id for p in picked] == [6, 4, 7, 3]

    def test_adjacent_at_document_edge(self) -> None:
        paragraphs = [_para(i, f"p{i} words") for i in range(4)]
        picked = sample_hard_negatives(_triple(0), paragraphs, n=3, strategy="adjacent")
        assert [p.paragraph_id for p in picked] == [1, 2, 3]

    def test_bm25_picks_context_matching_paragraph(self) -> None:
        paragraphs = [
            _para(0, "nothing shared here"),
            _para(1, "rare ctx words overlap strongly"),
            _para(2, "the positive paragraph text"),
        ]
        picked = sample_hard_negatives(
            _triple(2, context="rare ctx words overlap"), paragraphs, n=1, strategy="bm25"
        )
        assert [p.paragraph_id for p in picked] == [1]

    def test_n_exceeding_candidates_returns_all(self) -> None:
        paragraphs = [_para(i, f"p{i} words") for i in range(3)]
        picked = sample_hard_negatives(_triple(1), paragraphs, n=10, strategy="adjacent")
        assert sorted(p.paragraph_id for p in picked) == [0, 2]

    def test_never_returns_positive_or_duplicates(self) -> None:
        paragraphs = [_para(i, f"common words p{i}") for i in range(8)]
        for strategy in ("adjacent", "bm25"):
            picked = sample_hard_negatives(
                _triple(3, context="common words"), paragraphs, n=7, strategy=strategy
            )
            ids = [p.paragraph_id for p in picked]
            assert 3 not in ids
            assert len(ids) == len(set(ids))


class TestMakeTrainingExamples:
    def _book(self, n: int) -> dict[str, list[ParagraphRecord]]:
        return {"bk": [_para(i, f"paragraph {i} body") for i in range(n)]}

    def test_counts_one_positive_plus_n_negatives(self) -> None:
        examples, report = make_training_examples(
            [_triple(2)], self._book(5), n=2, strategy="adjacent"
        )
        assert len(examples) == 3
        assert [e.label for e in examples] == ["yes", "no", "no"]
        assert report.n_shortfall == 0

    def test_two_triples_two_positives(self) -> None:
        examples, _ = make_training_examples(
            [_triple(1), _triple(3)], self._book(5), n=1, strategy="adjacent"
        )
        assert sum(1 for e in examples if e.label == "yes") == 2

    def test_default_nine_negatives(self) -> None:
        examples, report = make_training_examples([_triple(5)], self._book(12))
        assert len(examples) == 10
        assert report.n_shortfall == 0

    def test_shortfall_flagged(self) -> None:
        examples, report = make_training_examples([_triple(0)], self._book(3), n=9)
        assert len(examples) == 3  # 1 positive + only 2 available negatives
        assert report.n_shortfall == 1
        assert report.shortfall_context_ids == [0]


def _candidates(texts: list[str]) -> list[RankedParagraph]:
    return [RankedParagraph(id=i, score=1.0 - 0.1 * i, text=t) for i, t in enumerate(texts)]


class TestRerank:
    def test_full_overlap_candidate_ranks_first(self) -> None:
        candidates = _candidates(["unrelated body", "alpha beta gamma body", "alpha only"])
        ranked = rerank(candidates, "alpha beta gamma", OverlapStubBackend())
        assert ranked[0].id == 1

    def test_equal_scores_preserve_first_stage_order(self) -> None:
        candidates = _candidates(["same text", "same text", "same text"])
        ranked = rerank(candidates, "query words", OverlapStubBackend())
        assert [c.id for c in ranked] == [0, 1, 2]

    def test_stub_probability_fixture_order(self) -> None:
        class Fixed:
            name = "fixed"
            table = {"c0": 0.9, "c1": 0.1, "c2": 0.5}

            def yes_no_probs(self, prompt: str) -> tuple[float, float]:
                p = next(v for k, v in self.table.items() if k in prompt)
                return p, 1.0 - p

        ranked = rerank(_candidates(["c0", "c1", "c2"]), "ctx", Fixed())
        assert [c.id for c in ranked] == [0, 2, 1]

    def test_output_is_permutation_of_input(self) -> None:
        candidates = _candidates([f"text {i} words" for i in range(6)])
        ranked = rerank(candidates, "text words", OverlapStubBackend(), max_workers=3)
        assert sorted(c.id for c in ranked) == list(range(6))

    def test_backend_failure_drops_only_that_candidate(self) -> None:
        class Flaky:
            name = "flaky"

            def yes_no_probs(self, prompt: str) -> tuple[float, float]:
                if "poison" in prompt:
                    raise RuntimeError("no")
                return 0.5, 0.5

        ranked = rerank(_candidates(["fine", "poison pill", "fine too"]), "ctx", Flaky())
        assert sorted(c.id for c in ranked) == [0, 2]


class TestTrainReranker:
    def _synthetic(self, n_contexts: int = 30):
        # relevance rule: the positive paragraph shares the context's rare token
        from quoteforge.rerank import RerankExample

        examples = []
        for i in range(n_contexts):
            rare = f"rare{i}token"
            context = f"shared filler {rare} in context"
            examples.append(RerankExample(context, f"body mentioning {rare} clearly", "yes"))
            examples.append(RerankExample(context, "body with no special term", "no"))
            examples.append(RerankExample(context, "another plain body", "no"))
        return examples

    def test_dev_p_at_1_reaches_090(self) -> None:
        examples = self._synthetic(30)
        backend = train_reranker(examples, LogisticOverlapBackend(), RerankTrainConfig(epochs=300))
        assert dev_precision_at_1(backend, examples) >= 0.9

    def test_zero_epochs_returns_initial_backend(self) -> None:
        backend = LogisticOverlapBackend()
        initial_weights = backend.weights.copy()
        out = train_reranker(self._synthetic(5), backend, RerankTrainConfig(epochs=0))
        assert out is backend
        assert (out.weights == initial_weights).all()

    def test_empty_examples_rejected(self) -> None:
        with pytest.raises(ValueError):
            train_reranker([], LogisticOverlapBackend())

    def test_untrainable_backend_rejected(self) -> None:
        with pytest.raises(TypeError):
            train_reranker(self._synthetic(3), OverlapStubBackend())

    def test_registry(self) -> None:
        assert get_reranker_backend("overlap-stub").name == "overlap-stub"
        with pytest.raises(KeyError):
            get_reranker_backend("missing")
