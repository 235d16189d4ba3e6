"""Reader checkpoints: encoder weights, head parameters, and config."""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np
import torch

from quoteforge.binio import load_matrices, save_matrices
from quoteforge.reader.model import EncoderConfig, ReaderModel
from quoteforge.reader.tokenizer import HashingWordPieceTokenizer
from quoteforge.reader.training import ReaderTrainConfig, TrainedReader

ENCODER_FILE = "encoder.pt"
HEADS_FILE = "heads.bin"
CONFIG_FILE = "reader_config.json"

# Fixed block order inside heads.bin.
_HEAD_LAYOUT = ["start_vector", "end_vector", "transitions", "emission_weight", "emission_bias"]


def save_reader(reader: TrainedReader, directory: Path | str) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    model = reader.model
    torch.save(model.encoder.state_dict(), directory / ENCODER_FILE)
    save_matrices(
        directory / HEADS_FILE,
        [
            model.start_vector.detach().numpy().reshape(1, -1),
            model.end_vector.detach().numpy().reshape(1, -1),
            model.transitions.detach().numpy(),
            model.emission.weight.detach().numpy(),
            model.emission.bias.detach().numpy().reshape(1, -1),
        ],
    )
    config = {
        "encoder": model.config.to_dict(),
        "tokenizer": reader.tokenizer.config(),
        "train": asdict(reader.config),
        "heads_layout": _HEAD_LAYOUT,
    }
    config["train"]["encoder"] = model.config.to_dict()
    (directory / CONFIG_FILE).write_text(json.dumps(config, indent=2), encoding="utf-8")


def load_reader(directory: Path | str) -> TrainedReader:
    directory = Path(directory)
    config_file = directory / CONFIG_FILE
    if not config_file.is_file():
        raise FileNotFoundError(f"no {CONFIG_FILE} under {directory}")
    config = json.loads(config_file.read_text(encoding="utf-8"))

    encoder_config = EncoderConfig(**config["encoder"])
    train_kwargs = dict(config["train"])
    train_kwargs["encoder"] = encoder_config
    train_config = ReaderTrainConfig(**train_kwargs)

    model = ReaderModel(encoder_config)
    model.encoder.load_state_dict(torch.load(directory / ENCODER_FILE, weights_only=True))
    heads = load_matrices(directory / HEADS_FILE)
    if len(heads) != len(_HEAD_LAYOUT):
        raise ValueError(f"expected {len(_HEAD_LAYOUT)} head blocks, found {len(heads)}")
    start, end, transitions, emission_weight, emission_bias = heads
    with torch.no_grad():
        model.start_vector.copy_(torch.from_numpy(np.asarray(start[0])))
        model.end_vector.copy_(torch.from_numpy(np.asarray(end[0])))
        model.transitions.copy_(torch.from_numpy(np.asarray(transitions)))
        model.emission.weight.copy_(torch.from_numpy(np.asarray(emission_weight)))
        model.emission.bias.copy_(torch.from_numpy(np.asarray(emission_bias[0])))

    tokenizer = HashingWordPieceTokenizer(**config["tokenizer"])
    return TrainedReader(model, tokenizer, train_config)
