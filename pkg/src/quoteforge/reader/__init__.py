"""Multi-task reader: span prediction plus CRF-based BIO quotability tagging."""

from quoteforge.reader.bio import B, I, LABEL_NAMES, O, bio_from_span, decode_bio
from quoteforge.reader.checkpoint import load_reader, save_reader
from quoteforge.reader.crf import crf_log_likelihood, crf_nll_batch, log_partition, path_score, viterbi_decode
from quoteforge.reader.model import (
    EncoderConfig,
    ReaderModel,
    SpanPrediction,
    ToyTransformerEncoder,
    joint_loss,
    predict_spans,
    span_loss,
)
from quoteforge.reader.packing import (
    MAX_INPUT_WORDPIECES,
    PackedInput,
    PackingError,
    chars_to_token_span,
    pack_input,
)
from quoteforge.reader.tokenizer import HashingWordPieceTokenizer, TokenizedText, TokenSpan
from quoteforge.reader.training import (
    ReaderExample,
    ReaderTrainConfig,
    TrainedReader,
    build_examples,
    evaluate_reader,
    fewshot_finetune,
    train_reader,
)

__all__ = [
    "B",
    "EncoderConfig",
    "HashingWordPieceTokenizer",
    "I",
    "LABEL_NAMES",
    "MAX_INPUT_WORDPIECES",
    "O",
    "PackedInput",
    "PackingError",
    "ReaderExample",
    "ReaderModel",
    "ReaderTrainConfig",
    "SpanPrediction",
    "TokenSpan",
    "TokenizedText",
    "ToyTransformerEncoder",
    "TrainedReader",
    "bio_from_span",
    "build_examples",
    "chars_to_token_span",
    "crf_log_likelihood",
    "crf_nll_batch",
    "decode_bio",
    "evaluate_reader",
    "fewshot_finetune",
    "joint_loss",
    "load_reader",
    "log_partition",
    "pack_input",
    "path_score",
    "predict_spans",
    "save_reader",
    "span_loss",
    "train_reader",
    "viterbi_decode",
]
