import hashlib
import json

import numpy as np
import pytest


class FakeEncoder:
    """Deterministic offline stand-in: hash each text to a unit vector.

    Lets the format, batching, and resume logic run without a model.
    Counts calls so tests can assert what was (not) re-encoded.
    """

    def __init__(self, dim=32):
        self.dim = dim
        self.encoded_texts = []

    def __call__(self, texts):
        self.encoded_texts.extend(texts)
        out = np.empty((len(texts), self.dim))
        for i, text in enumerate(texts):
            digest = hashlib.sha256(text.encode("utf-8")).digest()
            seed = int.from_bytes(digest[:8], "big")
            rng = np.random.default_rng(seed)
            vec = rng.standard_normal(self.dim)
            out[i] = vec / np.linalg.norm(vec)
        return out


@pytest.fixture
def fake_encoder():
    return FakeEncoder()


@pytest.fixture
def input_jsonl(tmp_path):
    path = tmp_path / "messages.jsonl"
    rows = [
        {"id": f"m{i:03d}", "text": f"message body number {i}"}
        for i in range(10)
    ]
    rows[7]["text"] = ""  # empty text is encoded (and warned about)
    path.write_text(
        "\n".join(json.dumps(r, ensure_ascii=False) for r in rows) + "\n"
    )
    return path


def load_real_model():
    """The default multilingual model, or None when not obtainable here.

    Probes the local cache only (fast); set MSGEMBED_ALLOW_DOWNLOAD=1 to
    let the probe hit the network.
    """
    import os

    if not os.environ.get("MSGEMBED_ALLOW_DOWNLOAD"):
        os.environ.setdefault("HF_HUB_OFFLINE", "1")
    try:
        from msgembed.encoders import SentenceTransformerEncoder

        return SentenceTransformerEncoder(
            "paraphrase-multilingual-MiniLM-L12-v2", "cpu")
    except Exception:
        return None
    finally:
        if not os.environ.get("MSGEMBED_ALLOW_DOWNLOAD"):
            os.environ.pop("HF_HUB_OFFLINE", None)
