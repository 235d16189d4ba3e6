from __future__ import annotations

import pytest
import torch

from quoteforge.reader import (
    EncoderConfig,
    ReaderTrainConfig,
    TrainedReader,
    build_examples,
    evaluate_reader,
    fewshot_finetune,
    load_reader,
    save_reader,
    train_reader,
)
from quoteforge.reader.bio import O
from quoteforge.reader.model import ReaderModel

TINY_ENCODER = EncoderConfig(vocab_size=1024, hidden_size=32, num_layers=1, num_heads=2,
                             ffn_size=64, max_len=256, dropout=0.0)


def tiny_config(**overrides) -> ReaderTrainConfig:
    defaults = dict(epochs=2, batch_size=8, lr=1e-3, seed=0, max_len=256, encoder=TINY_ENCODER)
    defaults.update(overrides)
    return ReaderTrainConfig(**defaults)


class TestBuildExamples:
    def test_examples_carry_consistent_gold(self, small_triples, tokenizer) -> None:
        examples, skipped = build_examples(small_triples, tokenizer, 384)
        assert skipped == 0
        for example in examples[:10]:
            assert example.packed.span_text(example.gold_start, example.gold_end) == example.triple.quote
            assert example.labels[example.gold_start] == 0  # B
            assert all(lab == O for lab in example.labels[: example.gold_start])

    def test_truncation_skips_unanswerable(self, small_triples, tokenizer) -> None:
        # budget keeps only the head of each paragraph: late quotes are lost
        examples, skipped = build_examples(small_triples, tokenizer, 96)
        assert skipped + len(examples) == len(small_triples)
        assert skipped > 0
        assert examples  # early quotes survive


class TestTrainReader:
    def test_zero_epochs_returns_initial_model(self, small_triples) -> None:
        torch.manual_seed(0)
        config = tiny_config(epochs=0)
        reader = train_reader(small_triples[:8], config=config)
        fresh = train_reader(small_triples[:8], config=config)
        prediction_a = reader.predict(small_triples[0].context, small_triples[0].paragraph)
        prediction_b = fresh.predict(small_triples[0].context, small_triples[0].paragraph)
        assert [(p.start_wp, p.end_wp) for p in prediction_a] == [
            (p.start_wp, p.end_wp) for p in prediction_b
        ]

    def test_empty_train_set_rejected(self) -> None:
        with pytest.raises(ValueError):
            train_reader([], config=tiny_config())

    def test_two_epoch_run_logs_history(self, small_triples) -> None:
        reader = train_reader(small_triples[:16], small_triples[16:20], tiny_config())
        assert len(reader.history) == 2
        assert {"epoch", "train_loss", "dev_em", "dev_bow_f1"} <= set(reader.history[0])

    def test_determinism_under_fixed_seed(self, small_triples) -> None:
        a = train_reader(small_triples[:8], config=tiny_config(epochs=1))
        b = train_reader(small_triples[:8], config=tiny_config(epochs=1))
        for pa, pb in zip(a.model.parameters(), b.model.parameters()):
            assert torch.equal(pa, pb)

    def test_softmax_and_span_only_ablations_run(self, small_triples) -> None:
        for tagger in ("softmax", "none"):
            reader = train_reader(small_triples[:8], config=tiny_config(epochs=1, tagger=tagger))
            assert reader.history[0]["train_loss"] > 0

    def test_fewshot_smoke_and_base_isolation(self, small_triples) -> None:
        base = train_reader(small_triples[:8], config=tiny_config(epochs=1))
        base_params = [p.detach().clone() for p in base.model.parameters()]
        tuned = fewshot_finetune(base, small_triples[8:16], lr=1e-5, epochs=1)
        assert isinstance(tuned, TrainedReader)
        for before, after in zip(base_params, base.model.parameters()):
            assert torch.equal(before, after)


class TestEvaluateReader:
    def test_scores_in_unit_interval(self, small_triples) -> None:
        reader = train_reader(small_triples[:8], config=tiny_config(epochs=1))
        scores = evaluate_reader(reader, small_triples[20:24])
        assert 0.0 <= scores["em"] <= 1.0
        assert 0.0 <= scores["bow_f1"] <= 1.0

    def test_empty_eval_set(self, small_triples) -> None:
        reader = train_reader(small_triples[:8], config=tiny_config(epochs=0))
        assert evaluate_reader(reader, []) == {"em": 0.0, "bow_f1": 0.0}


class TestCheckpoint:
    def test_save_load_round_trip_preserves_predictions(self, tmp_path, small_triples) -> None:
        reader = train_reader(small_triples[:8], config=tiny_config(epochs=1))
        save_reader(reader, tmp_path / "ckpt")
        loaded = load_reader(tmp_path / "ckpt")
        triple = small_triples[0]
        original = reader.predict(triple.context, triple.paragraph, top_k=3)
        restored = loaded.predict(triple.context, triple.paragraph, top_k=3)
        assert [(p.start_wp, p.end_wp, round(p.score, 4)) for p in original] == [
            (p.start_wp, p.end_wp, round(p.score, 4)) for p in restored
        ]
        assert loaded.tag(triple.context, triple.paragraph) == reader.tag(
            triple.context, triple.paragraph
        )

    def test_checkpoint_files_exist(self, tmp_path, small_triples) -> None:
        reader = train_reader(small_triples[:4], config=tiny_config(epochs=0))
        save_reader(reader, tmp_path / "ckpt")
        assert (tmp_path / "ckpt" / "encoder.pt").is_file()
        assert (tmp_path / "ckpt" / "heads.bin").is_file()
        assert (tmp_path / "ckpt" / "reader_config.json").is_file()
        raw = (tmp_path / "ckpt" / "heads.bin").read_bytes()
        assert raw[:4] == b"QFVI"

    def test_missing_checkpoint_raises(self, tmp_path) -> None:
        with pytest.raises(FileNotFoundError):
            load_reader(tmp_path / "absent")
