"""WordNet-backed annotation with overlap-based word sense disambiguation.

Loads the standard WNDB file layout (index.pos / data.pos pairs), retrieves
candidate senses by (lemma, part of speech), and picks senses by comparing
each sense's definition words against a context window taken from the text.
The score is the proportion of distinct definition words found in the
context, so shorter definitions with the same overlap rank higher.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import LoadError, ParseError
from .model import Annotation, ConceptRef, SourceKind
from .pipeline import POS, TokenStream, context_window, tokenize

CONTEXT_RADIUS = 15

_POS_FILES = {
    POS.NOUN: "noun",
    POS.VERB: "verb",
    POS.ADJ: "adj",
    POS.ADV: "adv",
}

# data.pos ss_type letter -> part of speech ('s' = adjective satellite).
_SS_TYPES = {"n": POS.NOUN, "v": POS.VERB, "a": POS.ADJ, "s": POS.ADJ, "r": POS.ADV}

_VOWELS = set("aeiou")


def default_stopwords() -> frozenset[str]:
    """The shipped function-word stoplist (data/stopwords.txt)."""
    text = resources.files("semannot").joinpath("data/stopwords.txt").read_text("utf-8")
    words = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line.lower())
    return frozenset(words)


@dataclass(frozen=True)
class Synset:
    """One sense: identifier, part of speech, member lemmas and gloss."""

    id: str
    pos: POS
    lemmas: tuple[str, ...]
    gloss: str


@dataclass(frozen=True)
class LeskScore:
    overlap: int
    definition_length: int
    value: Fraction


class LexDatabase:
    """Senses keyed by (lowercased lemma, part of speech), in file order."""

    def __init__(self):
        self._senses: dict[tuple[str, POS], list[Synset]] = {}
        self.synsets: dict[str, Synset] = {}

    def add_entry(self, lemma: str, pos: POS, synsets: list[Synset]) -> None:
        self._senses[(lemma.lower(), pos)] = list(synsets)
        for syn in synsets:
            self.synsets[syn.id] = syn

    def senses(self, lemma: str, pos: POS) -> list[Synset]:
        return list(self._senses.get((lemma.lower(), pos), ()))

    def has_lemma(self, lemma: str, pos: POS) -> bool:
        return (lemma.lower(), pos) in self._senses

    def __len__(self) -> int:
        return len(self._senses)


def _is_header(line: str) -> bool:
    # WNDB license headers are indented with spaces.
    return line.startswith(" ")


def _parse_data_file(path: Path):
    """offset -> Synset for one data.pos file."""
    synsets = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if _is_header(line) or not line.strip():
                continue
            if "|" not in line:
                raise ParseError("data line has no gloss separator '|'",
                                 path=str(path), line=lineno)
            head, _, gloss_part = line.partition("|")
            fields = head.split()
            if len(fields) < 4:
                raise ParseError("truncated synset line", path=str(path), line=lineno)
            offset = fields[0]
            ss_type = fields[2]
            if ss_type not in _SS_TYPES:
                raise ParseError(f"unknown synset type {ss_type!r}",
                                 path=str(path), line=lineno)
            try:
                word_count = int(fields[3], 16)
            except ValueError as exc:
                raise ParseError(f"bad word count field {fields[3]!r}",
                                 path=str(path), line=lineno) from exc
            words = fields[4 : 4 + 2 * word_count : 2]
            if len(words) != word_count:
                raise ParseError("word list shorter than declared count",
                                 path=str(path), line=lineno)
            lemmas = tuple(_clean_lemma(w) for w in words)
            # Definition is the gloss text before the first ';', which
            # starts the quoted usage examples.
            definition = gloss_part.split(";", 1)[0].strip()
            synsets[offset] = Synset(
                id=f"{ss_type}{offset}", pos=_SS_TYPES[ss_type],
                lemmas=lemmas, gloss=definition,
            )
    return synsets


def _clean_lemma(word: str) -> str:
    # Underscores join multi-word lemmas; adjectives may carry a syntactic
    # position marker suffix like "(p)".
    if word.endswith(")") and "(" in word:
        word = word[: word.rindex("(")]
    return word.replace("_", " ")


def _parse_index_file(path: Path):
    """lemma -> list of synset offsets, preserving file order."""
    entries = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if _is_header(line) or not line.strip():
                continue
            fields = line.split()
            if len(fields) < 6:
                raise ParseError("truncated index line", path=str(path), line=lineno)
            lemma = fields[0].replace("_", " ")
            try:
                pointer_count = int(fields[3])
                sense_count = int(fields[4 + pointer_count])
            except (ValueError, IndexError) as exc:
                raise ParseError("bad index counts", path=str(path), line=lineno) from exc
            offsets = fields[6 + pointer_count : 6 + pointer_count + sense_count]
            if len(offsets) != sense_count:
                raise ParseError("offset list shorter than declared sense count",
                                 path=str(path), line=lineno)
            entries[lemma] = offsets
    return entries


def load_wndb(directory) -> LexDatabase:
    """Load index.{noun,verb,adj,adv} and data.{noun,verb,adj,adv}.

    Only the fields this annotator needs are read: lemma-to-offset lists
    from the index files, member lemmas and the definition part of the
    gloss from the data files.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise LoadError(f"lexical database directory not found: {directory}")
    db = LexDatabase()
    for pos, suffix in _POS_FILES.items():
        index_path = directory / f"index.{suffix}"
        data_path = directory / f"data.{suffix}"
        for path in (index_path, data_path):
            if not path.is_file():
                raise LoadError(f"missing lexical database file: {path}")
        by_offset = _parse_data_file(data_path)
        for lemma, offsets in _parse_index_file(index_path).items():
            synsets = []
            for offset in offsets:
                if offset not in by_offset:
                    raise ParseError(
                        f"index entry {lemma!r} references unknown offset {offset}",
                        path=str(index_path),
                    )
                synsets.append(by_offset[offset])
            db.add_entry(lemma, pos, synsets)
    return db


def _morph_candidates(lemma: str, pos: POS) -> list[str]:
    """Base forms to retry after an exact lookup miss.  No exception lists."""
    out = []
    if pos is POS.NOUN:
        if lemma.endswith("ies") and len(lemma) > 3:
            out.append(lemma[:-3] + "y")
        if lemma.endswith("es") and len(lemma) > 2:
            out.append(lemma[:-2])
        if lemma.endswith("s") and len(lemma) > 1:
            out.append(lemma[:-1])
    elif pos is POS.VERB:
        for suffix in ("ing", "ed"):
            if lemma.endswith(suffix) and len(lemma) > len(suffix) + 1:
                stem = lemma[: -len(suffix)]
                # Silent-e restoration first ("hoping" -> "hope"), then the
                # bare stem, then doubled-consonant reduction ("running").
                out.append(stem + "e")
                out.append(stem)
                if len(stem) >= 2 and stem[-1] == stem[-2] and stem[-1] not in _VOWELS:
                    out.append(stem[:-1])
        if lemma.endswith("s") and len(lemma) > 1:
            out.append(lemma[:-1])
    return out


def lookup_senses(db: LexDatabase, lemma: str, pos: POS) -> list[Synset]:
    """All senses for (lemma, pos); retries stripped suffix forms on a miss."""
    lemma = lemma.lower()
    senses = db.senses(lemma, pos)
    if senses:
        return senses
    for candidate in _morph_candidates(lemma, pos):
        senses = db.senses(candidate, pos)
        if senses:
            return senses
    return []


def definition_words(gloss: str, stopwords: frozenset[str]) -> frozenset[str]:
    """Distinct lowercased definition words, stoplist applied.

    Only the definition part of the gloss counts; anything after the first
    ';' is quoted usage examples.
    """
    definition = gloss.split(";", 1)[0]
    words = set()
    for token in tokenize(definition):
        if token.is_word():
            word = token.surface.lower()
            if word not in stopwords:
                words.add(word)
    return frozenset(words)


def lesk_rank(
    senses: list[Synset],
    context: list[str],
    stopwords: frozenset[str] | None = None,
) -> list[tuple[Synset, LeskScore]]:
    """Score every sense against the context and sort best-first.

    Score = (distinct definition words present in the context) divided by
    (number of distinct definition words), as an exact fraction in [0, 1].
    Ties keep their input order.  A sense whose processed definition is
    empty scores 0 with a length floor of 1.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    context_set = set(context)
    scored = []
    for sense in senses:
        words = definition_words(sense.gloss, stopwords)
        length = max(len(words), 1)
        overlap = sum(1 for word in words if word in context_set)
        scored.append((sense, LeskScore(overlap, length, Fraction(overlap, length))))
    return sorted(scored, key=lambda pair: pair[1].value, reverse=True)


def disambiguate(
    senses: list[Synset],
    context: list[str],
    stopwords: frozenset[str] | None = None,
) -> list[Synset]:
    """The top-scoring sense; all of them when several tie on the maximum.

    When every sense scores 0 they all tie, so the whole candidate list
    comes back and the caller decides.
    """
    if not senses:
        raise ValueError("disambiguate requires a non-empty sense list")
    ranked = lesk_rank(senses, context, stopwords)
    best = ranked[0][1].value
    return [sense for sense, score in ranked if score.value == best]


def annotate_wordnet(
    text: str,
    stream: TokenStream,
    db: LexDatabase,
    stopwords: frozenset[str] | None = None,
    provenance=None,
) -> list[Annotation]:
    """One annotation per surviving sense of every open-class token.

    ``stream`` must be POS-tagged.  Each annotation carries the synset id,
    its gloss and the disambiguation score.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    annotations = []
    for index, token in enumerate(stream):
        if token.pos is POS.OTHER:
            continue
        senses = lookup_senses(db, token.surface, token.pos)
        if not senses:
            continue
        window = context_window(stream, index, CONTEXT_RADIUS)
        ranked = lesk_rank(senses, window, stopwords)
        best = ranked[0][1].value
        for sense, score in ranked:
            if score.value != best:
                break
            annotations.append(
                Annotation(
                    span=token.span,
                    surface=token.surface,
                    source=SourceKind.WORDNET,
                    concepts=(ConceptRef(id=sense.id, definition=sense.gloss),),
                    score=float(score.value),
                    provenance=provenance,
                )
            )
    return annotations
