"""EvalDataset disk layout: per-character folders of PNGs plus labels.json."""
from __future__ import annotations

import json
from pathlib import Path

from ..errors import IoFailure
from ..providers.types import RenderedImage
from ..raster.pngio import decode_rgb_png, encode_rgb_png
from .metrics import Candidate, EvalDataset


def _char_dir(ch: str) -> str:
    return f"char_{ord(ch):04x}"


def save_dataset(dataset: EvalDataset, root) -> Path:
    root = Path(root)
    try:
        for ch, pool in dataset.per_character.items():
            d = root / _char_dir(ch)
            d.mkdir(parents=True, exist_ok=True)
            labels = {}
            for cand in pool:
                labels[cand.id] = int(bool(cand.label))
                if isinstance(cand.image, RenderedImage):
                    (d / f"{cand.id}.png").write_bytes(encode_rgb_png(cand.image.pixels))
            (d / "labels.json").write_text(json.dumps(labels, indent=0, sort_keys=True))
    except OSError as exc:
        raise IoFailure(f"cannot write dataset under {root}: {exc}") from exc
    return root


def load_dataset(root) -> EvalDataset:
    root = Path(root)
    per_character = {}
    try:
        for d in sorted(root.iterdir()):
            if not d.is_dir() or not d.name.startswith("char_"):
                continue
            ch = chr(int(d.name.split("_")[1], 16))
            labels = json.loads((d / "labels.json").read_text())
            pool = []
            for cid, label in sorted(labels.items()):
                png = d / f"{cid}.png"
                image = RenderedImage(decode_rgb_png(png.read_bytes())) if png.exists() else None
                pool.append(
                    Candidate(id=cid, character=ch, label=bool(label), image=image)
                )
            per_character[ch] = pool
    except OSError as exc:
        raise IoFailure(f"cannot read dataset under {root}: {exc}") from exc
    if not per_character:
        raise IoFailure(f"no character folders under {root}")
    return EvalDataset(per_character)
