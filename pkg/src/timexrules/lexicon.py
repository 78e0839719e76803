"""Tokenizer, token-type lexicon, stop words and surface-pattern matching."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Union

from .temporal import DayPart, MonthName, Season, TimeUnit, Weekday

MONTH = "MONTH"
WEEK = "WEEK"
SEASON = "SEASON"
DAY_TIME = "DAY_TIME"
TIME_UNIT = "TIME_UNIT"
IN_EQ = "IN_EQ"
NUM = "NUM"

TOKEN_TYPES = (MONTH, WEEK, SEASON, DAY_TIME, TIME_UNIT, IN_EQ)
SLOT_TYPES = TOKEN_TYPES + (NUM,)

_CANONICAL = {
    MONTH: lambda s: MonthName[s],
    WEEK: lambda s: Weekday[s],
    SEASON: lambda s: Season[s],
    DAY_TIME: lambda s: DayPart[s],
    TIME_UNIT: TimeUnit.from_label,
    IN_EQ: str,
}

_MONTH_ABBR = {
    "January": "jan", "February": "feb", "March": "mar", "April": "apr",
    "May": None, "June": "jun", "July": "jul", "August": "aug",
    "September": "sep|sept", "October": "oct", "November": "nov", "December": "dec",
}
_WEEKDAY_ABBR = {
    "Monday": "mon", "Tuesday": "tue|tues", "Wednesday": "wed",
    "Thursday": "thu|thur|thurs", "Friday": "fri", "Saturday": "sat", "Sunday": "sun",
}
_UNIT_VARIANTS = {
    "second": "seconds|sec|secs",
    "minute": "minutes|min|mins",
    "hour": "hours|hr|hrs",
    "day": "days",
    "week": "weeks",
    "month": "months",
    "quarter": "quarters",
    "season": "seasons",
    "year": "years|yr|yrs",
    "decade": "decades",
    "century": "centuries",
}
_IN_EQ_PHRASES = (
    "a mere", "no more than", "at least", "at most", "up to", "more than",
    "less than", "nearly", "about", "around", "almost", "over",
)

DEFAULT_STOPWORDS = frozenset(
    "a an the this that these those of in on at to for from by and or".split()
    + [",", "-", "–", "/", "."]
)

_CARDINALS = (
    "zero one two three four five six seven eight nine ten eleven twelve thirteen "
    "fourteen fifteen sixteen seventeen eighteen nineteen twenty"
).split()
_TENS = {"twenty": 20, "thirty": 30, "forty": 40, "fifty": 50, "sixty": 60,
         "seventy": 70, "eighty": 80, "ninety": 90}
_ORDINALS = (
    "zeroth first second third fourth fifth sixth seventh eighth ninth tenth eleventh "
    "twelfth thirteenth fourteenth fifteenth sixteenth seventeenth eighteenth "
    "nineteenth twentieth"
).split()
_ORDINAL_UNITS = dict(zip(_ORDINALS[1:10], range(1, 10)))


def _number_words() -> dict:
    words = {}
    for n, w in enumerate(_CARDINALS[1:], start=1):
        words[w] = (n, "cardinal")
    for n, w in enumerate(_ORDINALS[1:], start=1):
        words[w] = (n, "ordinal")
    for w, n in _TENS.items():
        words[w] = (n, "cardinal")
    words["thirtieth"] = (30, "ordinal")
    for unit_word, n in zip(_CARDINALS[1:10], range(1, 10)):
        for tens in ("twenty", "thirty"):
            if _TENS[tens] + n <= 31:
                words[f"{tens}-{unit_word}"] = (_TENS[tens] + n, "cardinal")
    for w, n in _ORDINAL_UNITS.items():
        for tens in ("twenty", "thirty"):
            if _TENS[tens] + n <= 31:
                words[f"{tens}-{w}"] = (_TENS[tens] + n, "ordinal")
    return words


NUMBER_WORDS = _number_words()


@dataclass(frozen=True)
class LexEntry:
    type: str
    canonical: str
    variants: tuple

    @property
    def value(self):
        return _CANONICAL[self.type](self.canonical)


def default_entries() -> list:
    entries = []
    for name, abbr in _MONTH_ABBR.items():
        variants = [name.lower()]
        for a in (abbr or "").split("|"):
            if a:
                variants += [a, a + "."]
        entries.append(LexEntry(MONTH, name, tuple(variants)))
    for name, abbr in _WEEKDAY_ABBR.items():
        variants = [name.lower(), name.lower() + "s"]
        for a in abbr.split("|"):
            variants += [a, a + "."]
        entries.append(LexEntry(WEEK, name, tuple(variants)))
    entries += [
        LexEntry(SEASON, "Spring", ("spring", "springs")),
        LexEntry(SEASON, "Summer", ("summer", "summers")),
        LexEntry(SEASON, "Fall", ("fall", "autumn", "autumns")),
        LexEntry(SEASON, "Winter", ("winter", "winters")),
        LexEntry(DAY_TIME, "Morning", ("morning", "mornings")),
        LexEntry(DAY_TIME, "Afternoon", ("afternoon", "afternoons")),
        LexEntry(DAY_TIME, "Evening", ("evening", "evenings")),
        LexEntry(DAY_TIME, "Night", ("night", "nights")),
        LexEntry(DAY_TIME, "Noon", ("noon",)),
        LexEntry(DAY_TIME, "Midnight", ("midnight",)),
    ]
    for unit, more in _UNIT_VARIANTS.items():
        entries.append(LexEntry(TIME_UNIT, unit, (unit,) + tuple(more.split("|"))))
    for phrase in _IN_EQ_PHRASES:
        entries.append(LexEntry(IN_EQ, phrase, (phrase,)))
    return entries


@dataclass(frozen=True)
class Token:
    surface: str
    kind: str = "word"  # word | number | punct
    number: Optional[int] = None
    style: Optional[str] = None  # cardinal | ordinal | digits
    tags: tuple = ()  # ((TYPE, value), ...)

    @cached_property
    def type_tags(self) -> frozenset:
        return frozenset(t for t, _ in self.tags)

    def value_of(self, type_: str):
        for t, v in self.tags:
            if t == type_:
                return v
        return None

    def __str__(self):
        return self.surface


_TOKEN_RE = re.compile(r"[^\W\d_]+(?:-[^\W\d_]+)*\.?|\d+(?:st|nd|rd|th)?|\S")
_DIGITS_RE = re.compile(r"(\d+)(st|nd|rd|th)?")


class Lexicon:
    """Static token-type lexicon plus stop words."""

    def __init__(self, entries=None, stopwords=None):
        self.entries = list(default_entries() if entries is None else entries)
        self.stopwords = frozenset(DEFAULT_STOPWORDS if stopwords is None else stopwords)
        self._words = {}
        self._phrases = {}
        for e in self.entries:
            value = e.value
            for variant in e.variants:
                words = tuple(variant.lower().split())
                table = self._words if len(words) == 1 else self._phrases
                key = words[0] if len(words) == 1 else words
                tags = table.setdefault(key, [])
                if (e.type, value) not in tags:
                    tags.append((e.type, value))
        self._max_phrase = max((len(k) for k in self._phrases), default=1)

    @classmethod
    def load(cls, lexicon_path=None, stopwords_path=None) -> "Lexicon":
        """Built-ins, optionally overridden from plain-text files.

        Lexicon lines are ``TYPE<TAB>canonical<TAB>v1|v2|...``; an entry
        replaces any built-in entry with the same type and canonical name.
        Stop-word files hold one word per line and replace the built-in list.
        """
        entries = default_entries()
        if lexicon_path:
            extra = read_lexicon_file(lexicon_path)
            keys = {(e.type, e.canonical) for e in extra}
            entries = [e for e in entries if (e.type, e.canonical) not in keys] + extra
        stopwords = None
        if stopwords_path:
            with open(stopwords_path, encoding="utf-8") as fh:
                stopwords = [line.strip().lower() for line in fh if line.strip()]
        return cls(entries, stopwords)

    def _word_token(self, surface: str) -> Token:
        tags = tuple(self._words.get(surface, ()))
        if surface in NUMBER_WORDS:
            n, style = NUMBER_WORDS[surface]
            return Token(surface, "number", n, style, tags)
        return Token(surface, "word", None, None, tags)

    def _split(self, text: str) -> list:
        pieces = []
        for m in _TOKEN_RE.finditer(text.lower()):
            piece = m.group(0)
            if piece.endswith(".") and len(piece) > 1 and piece not in self._words:
                pieces += [piece[:-1], "."]
            else:
                pieces.append(piece)
        out = []
        for piece in pieces:
            if len(piece) > 1 and "-" in piece and piece not in NUMBER_WORDS and piece not in self._words:
                for i, part in enumerate(piece.split("-")):
                    if i:
                        out.append("-")
                    if part:
                        out.append(part)
            else:
                out.append(piece)
        return out

    def tokenize(self, text: str) -> list:
        tokens = []
        for piece in self._split(text):
            m = _DIGITS_RE.fullmatch(piece)
            if m:
                style = "ordinal" if m[2] else "digits"
                tokens.append(Token(piece, "number", int(m[1]), style))
            elif piece[0].isalpha():
                tokens.append(self._word_token(piece))
            else:
                tokens.append(Token(piece, "punct"))
        tokens = self._tag_phrases(tokens)
        # "a"/"an" count as one directly before a time unit
        for i in range(len(tokens) - 1):
            t = tokens[i]
            if t.surface in ("a", "an") and TIME_UNIT in tokens[i + 1].type_tags:
                tokens[i] = Token(t.surface, "number", 1, "cardinal", t.tags)
        return tokens

    def _tag_phrases(self, tokens: list) -> list:
        if not self._phrases:
            return tokens
        tokens = list(tokens)
        surfaces = [t.surface for t in tokens]
        for size in range(self._max_phrase, 1, -1):
            for i in range(len(tokens) - size + 1):
                tags = self._phrases.get(tuple(surfaces[i:i + size]))
                if not tags:
                    continue
                for j in range(i, i + size):
                    t = tokens[j]
                    new = tuple(tg for tg in tags if tg not in t.tags)
                    tokens[j] = Token(t.surface, t.kind, t.number, t.style, t.tags + new)
        return tokens

    def is_stopword(self, token: Union[Token, str]) -> bool:
        surface = token.surface if isinstance(token, Token) else token.lower()
        return surface in self.stopwords


def read_lexicon_file(path) -> list:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 3 or cols[0] not in TOKEN_TYPES:
                raise ValueError(f"{path}:{lineno}: expected TYPE<TAB>canonical<TAB>variants")
            variants = tuple(v.strip().lower() for v in cols[2].split("|") if v.strip())
            entry = LexEntry(cols[0], cols[1], variants)
            try:
                entry.value
            except (KeyError, ValueError):
                raise ValueError(f"{path}:{lineno}: unknown {cols[0]} value {cols[1]!r}") from None
            entries.append(entry)
    return entries


DEFAULT_LEXICON = Lexicon()


def tokenize(text: str, lexicon: Lexicon = None) -> list:
    return (lexicon or DEFAULT_LEXICON).tokenize(text)


def is_stopword(token, lexicon: Lexicon = None) -> bool:
    return (lexicon or DEFAULT_LEXICON).is_stopword(token)


def num_vals(tokens) -> list:
    """Integers surfaced by the tokens, as a sorted multiset."""
    return sorted(t.number for t in tokens if t.number is not None)


# -- patterns ---------------------------------------------------------------

@dataclass(frozen=True)
class Slot:
    type: str
    var: int

    def __str__(self):
        return f"{self.type}:${self.var}"


_SLOT_RE = re.compile(r"([A-Z_]+):\$(\d+)")


@dataclass(frozen=True)
class Pattern:
    elements: tuple = field(default_factory=tuple)

    def __post_init__(self):
        slots = [e.var for e in self.elements if isinstance(e, Slot)]
        if slots != list(range(1, len(slots) + 1)):
            raise ValueError(f"pattern variables must be $1..$n left to right: {self}")

    def __str__(self):
        return " ".join(str(e) for e in self.elements)

    def __len__(self):
        return len(self.elements)

    @property
    def variables(self) -> dict:
        return {e.var: e.type for e in self.elements if isinstance(e, Slot)}

    @property
    def first_key(self) -> str:
        """Index key for the first element: its surface or its slot type."""
        first = self.elements[0]
        return first.type if isinstance(first, Slot) else first

    @classmethod
    def parse(cls, text: str) -> "Pattern":
        elements = []
        for part in text.split():
            m = _SLOT_RE.fullmatch(part)
            if m and m[1] in SLOT_TYPES:
                elements.append(Slot(m[1], int(m[2])))
            else:
                elements.append(part)
        return cls(tuple(elements))


def token_slot_value(token: Token, slot_type: str):
    if slot_type == NUM:
        return token.number
    return token.value_of(slot_type)


def match(pattern: Pattern, tokens) -> Optional[dict]:
    """Bind the pattern's variables against ``tokens`` or return None."""
    if len(pattern.elements) != len(tokens):
        return None
    binding = {}
    for el, tok in zip(pattern.elements, tokens):
        if isinstance(el, Slot):
            value = token_slot_value(tok, el.type)
            if value is None:
                return None
            binding[el.var] = value
        elif el != tok.surface:
            return None
    return binding
