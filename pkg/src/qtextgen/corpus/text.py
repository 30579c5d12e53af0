"""Word-level tokenization and the token <-> id bijection.

Ids 0..3 are reserved for PAD/BOS/EOS/UNK and never reassigned; an unknown
surface form encodes to UNK and decodes to the literal string "<UNK>".
"""

from __future__ import annotations

PAD_ID, BOS_ID, EOS_ID, UNK_ID = 0, 1, 2, 3
PAD, BOS, EOS, UNK = "<PAD>", "<BOS>", "<EOS>", "<UNK>"
RESERVED = (PAD, BOS, EOS, UNK)

_TERMINAL = ".!?"

__all__ = [
    "PAD_ID", "BOS_ID", "EOS_ID", "UNK_ID",
    "PAD", "BOS", "EOS", "UNK", "RESERVED",
    "tokenize", "Vocabulary",
]


def tokenize(text: str) -> list[str]:
    """Lowercase, split on whitespace, peel terminal punctuation into tokens."""
    out: list[str] = []
    for chunk in text.lower().split():
        tail: list[str] = []
        while chunk and chunk[-1] in _TERMINAL:
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        if chunk:
            out.append(chunk)
        out.extend(reversed(tail))
    return out


class Vocabulary:
    """Bijective token <-> id map with four reserved leading ids."""

    def __init__(self, tokens):
        self._id_to_token = list(RESERVED)
        self._token_to_id = {tok: i for i, tok in enumerate(self._id_to_token)}
        for tok in tokens:
            if tok not in self._token_to_id:
                self._token_to_id[tok] = len(self._id_to_token)
                self._id_to_token.append(tok)

    @classmethod
    def from_texts(cls, texts) -> "Vocabulary":
        seen: list[str] = []
        known: set[str] = set()
        for text in texts:
            for tok in tokenize(text):
                if tok not in known:
                    known.add(tok)
                    seen.append(tok)
        return cls(sorted(seen))

    def __len__(self) -> int:
        return len(self._id_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self._token_to_id

    def token_to_id(self, token: str) -> int:
        return self._token_to_id.get(token, UNK_ID)

    def id_to_token(self, idx: int) -> str:
        if not 0 <= idx < len(self._id_to_token):
            raise IndexError(f"token id {idx} out of range for vocabulary of size {len(self)}")
        return self._id_to_token[idx]

    def encode_tokens(self, tokens) -> list[int]:
        return [self.token_to_id(t) for t in tokens]

    def encode(self, text: str) -> list[int]:
        return self.encode_tokens(tokenize(text))

    def decode_tokens(self, ids, keep_specials: bool = False) -> list[str]:
        out = []
        for i in ids:
            tok = self.id_to_token(int(i))
            if tok in (PAD, BOS, EOS) and not keep_specials:
                continue
            out.append(tok)
        return out

    def decode(self, ids) -> str:
        return " ".join(self.decode_tokens(ids))

    def sequence(self, text: str) -> list[int]:
        """BOS-prefixed, EOS-suffixed id sequence for one sample."""
        return [BOS_ID, *self.encode(text), EOS_ID]
