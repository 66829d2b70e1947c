"""Reference measurements for 40 Europarl v7 translation directions.

Published test-set scores of Transformer systems trained between English and
20 other European languages on the controlled multi-parallel Europarl subset.
Cross-entropies are bits per sentence over the 2,000-sentence test set; the
reported XMI values were rounded independently of their components, so
xmi == h_lm - h_mt only holds to about +/-0.1 on these rows.

Useful as a realistic fixture for the analysis and plotting layers without
training anything.
"""

from __future__ import annotations

from dataclasses import dataclass

PIVOT = "en"

LANGS = (
    "bg", "cs", "da", "de", "el", "es", "et", "fi", "fr", "hu",
    "it", "lt", "lv", "nl", "pl", "pt", "ro", "sk", "sl", "sv",
)


@dataclass(frozen=True)
class ReferenceRow:
    src_lang: str
    tgt_lang: str
    bleu: float
    xmi: float
    h_lm: float
    h_mt: float

    @property
    def direction(self) -> str:
        return f"{self.src_lang}->{self.tgt_lang}"


# per language: (BLEU into en, XMI into en, H_MT(en|.),
#                BLEU from en, XMI from en, H_LM(.), H_MT(.|en))
_H_LM_EN = 154.2
_ROWS = {
    "bg": (47.4, 102.3, 51.8, 46.3, 106.2, 156.5, 50.3),
    "cs": (42.4, 97.0, 57.2, 34.7, 102.8, 164.0, 61.2),
    "da": (46.3, 99.7, 54.5, 45.0, 103.3, 152.7, 49.4),
    "de": (44.0, 96.5, 57.7, 36.3, 104.0, 167.6, 63.6),
    "el": (50.0, 105.3, 48.9, 45.5, 111.0, 163.7, 52.7),
    "es": (50.6, 103.8, 50.4, 50.2, 108.1, 159.3, 51.3),
    "et": (39.3, 92.8, 61.4, 27.7, 100.2, 162.5, 62.4),
    "fi": (38.2, 92.1, 62.0, 30.5, 98.0, 158.6, 60.6),
    "fr": (44.9, 97.0, 57.2, 45.7, 99.7, 154.9, 55.1),
    "hu": (38.4, 92.5, 61.6, 30.3, 99.1, 166.6, 67.5),
    "it": (40.8, 92.1, 62.1, 37.9, 95.3, 158.6, 63.3),
    "lt": (37.6, 89.2, 65.0, 31.0, 96.0, 159.2, 63.1),
    "lv": (40.3, 94.2, 60.0, 34.6, 99.3, 156.4, 57.0),
    "nl": (38.3, 86.5, 67.7, 34.9, 90.4, 159.7, 69.3),
    "pl": (39.8, 91.9, 62.3, 30.5, 98.3, 163.4, 65.1),
    "pt": (48.3, 102.5, 51.7, 46.7, 105.2, 159.3, 54.1),
    "ro": (50.5, 106.1, 48.1, 44.2, 112.4, 160.5, 48.1),
    "sk": (44.2, 99.8, 54.4, 39.8, 105.8, 157.7, 51.9),
    "sl": (45.3, 100.1, 54.1, 41.5, 107.9, 158.2, 50.3),
    "sv": (43.7, 96.9, 57.3, 41.3, 100.1, 153.1, 53.0),
}


def into_pivot_rows() -> list[ReferenceRow]:
    """The 20 directions translating into English."""
    return [
        ReferenceRow(
            src_lang=lang,
            tgt_lang=PIVOT,
            bleu=row[0],
            xmi=row[1],
            h_lm=_H_LM_EN,
            h_mt=row[2],
        )
        for lang, row in _ROWS.items()
    ]


def from_pivot_rows() -> list[ReferenceRow]:
    """The 20 directions translating from English."""
    return [
        ReferenceRow(
            src_lang=PIVOT,
            tgt_lang=lang,
            bleu=row[3],
            xmi=row[4],
            h_lm=row[5],
            h_mt=row[6],
        )
        for lang, row in _ROWS.items()
    ]


def europarl_reference() -> list[ReferenceRow]:
    """All 40 reference directions, into-pivot rows first."""
    return into_pivot_rows() + from_pivot_rows()
