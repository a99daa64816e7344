# JSON documents for matrices and shift equivalence chains, rationals carried as strings
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

from ExactMatrix import DomainError, MatrixError, RatMatrix, to_rat
from ShiftEquivalence import EsseStep, SseChain

logger = logging.getLogger('matrix_files')

PathLike = Union[str, Path]
STEP_FIELDS = ('A', 'B', 'U', 'V')


class MatrixFormatError(MatrixError):
    """A matrix or chain document could not be parsed."""


def matrix_to_document(A: RatMatrix) -> Dict[str, Any]:
    return {'rows': A.rows, 'cols': A.cols, 'entries': A.to_strings()}


def _require(doc: Dict[str, Any], key: str, where: str):
    if key not in doc:
        raise MatrixFormatError(f"{where}: missing field '{key}'")
    return doc[key]


def _parse_literal(value, where: str):
    if not isinstance(value, str):
        raise MatrixFormatError(f"{where}: entries must be rational literals in quotes, got {value!r}")
    try:
        return to_rat(value)
    except DomainError as e:
        raise MatrixFormatError(f"{where}: {e}") from e


def matrix_from_document(doc: Any, where: str = "matrix") -> RatMatrix:
    """Parses {"rows", "cols", "entries"}, checking the declared dimensions."""
    if not isinstance(doc, dict):
        raise MatrixFormatError(f"{where}: expected an object with rows, cols and entries")
    rows = _require(doc, 'rows', where)
    cols = _require(doc, 'cols', where)
    entries = _require(doc, 'entries', where)
    for name, value in (('rows', rows), ('cols', cols)):
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise MatrixFormatError(f"{where}: '{name}' must be a positive integer, got {value!r}")
    if not isinstance(entries, list) or len(entries) != rows:
        raise MatrixFormatError(f"{where}: declared {rows} rows but entries has "
                                f"{len(entries) if isinstance(entries, list) else 'no'} rows")
    grid = []
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != cols:
            raise MatrixFormatError(f"{where}: row {i + 1} does not have {cols} entries")
        grid.append([_parse_literal(x, f"{where}[{i + 1},{j + 1}]") for j, x in enumerate(row)])
    return RatMatrix(grid)


@dataclass
class ChainDocument:
    """A chain together with its declared metadata, as stored on disk."""
    chain: SseChain
    description: str = ""
    declared_lag: Optional[int] = None
    declared_size: Optional[int] = None

    def __post_init__(self):
        if self.declared_lag is None:
            self.declared_lag = self.chain.lag
        if self.declared_size is None:
            self.declared_size = self.chain.size

    def to_document(self) -> Dict[str, Any]:
        return {
            'description': self.description,
            'declared_lag': self.declared_lag,
            'declared_size': self.declared_size,
            'start': matrix_to_document(self.chain.start),
            'steps': [
                {name: matrix_to_document(getattr(step, name)) for name in STEP_FIELDS}
                for step in self.chain.steps
            ],
        }

    @classmethod
    def from_document(cls, doc: Any) -> 'ChainDocument':
        if not isinstance(doc, dict):
            raise MatrixFormatError("chain: expected an object")
        steps_doc = _require(doc, 'steps', "chain")
        if not isinstance(steps_doc, list):
            raise MatrixFormatError("chain: 'steps' must be a list")
        steps = []
        for k, step_doc in enumerate(steps_doc, start=1):
            if not isinstance(step_doc, dict):
                raise MatrixFormatError(f"step {k}: expected an object with A, B, U, V")
            matrices = {name: matrix_from_document(_require(step_doc, name, f"step {k}"), f"step {k} {name}")
                        for name in STEP_FIELDS}
            steps.append(EsseStep(**matrices))
        start = doc.get('start')
        start = matrix_from_document(start, "start") if start is not None else None
        if start is None and not steps:
            raise MatrixFormatError("chain: an empty chain needs a 'start' matrix")

        declared = {}
        for key in ('declared_lag', 'declared_size'):
            value = _require(doc, key, "chain")
            if isinstance(value, bool) or not isinstance(value, int):
                raise MatrixFormatError(f"chain: '{key}' must be an integer, got {value!r}")
            declared[key] = value
        description = doc.get('description', "")
        if not isinstance(description, str):
            raise MatrixFormatError("chain: 'description' must be text")
        return cls(SseChain(tuple(steps), start), description, **declared)

    def metadata_mismatches(self) -> Dict[str, str]:
        mismatches = {}
        if self.declared_lag != self.chain.lag:
            mismatches['declared_lag'] = f"declared {self.declared_lag}, chain has {self.chain.lag} steps"
        if self.declared_size != self.chain.size:
            mismatches['declared_size'] = f"declared {self.declared_size}, largest matrix is {self.chain.size}"
        return mismatches


def _read_json(path: PathLike) -> Any:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except OSError as e:
        raise MatrixFormatError(f"Cannot read {path}: {e.strerror or e}") from e
    except json.JSONDecodeError as e:
        raise MatrixFormatError(f"{path} is not valid JSON: {e}") from e


def _write_json(document: Dict[str, Any], path: PathLike):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(document, f, indent=2)
        f.write("\n")


def dumps_matrix(A: RatMatrix) -> str:
    return json.dumps(matrix_to_document(A), indent=2)


def loads_matrix(text: str) -> RatMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MatrixFormatError(f"Not valid JSON: {e}") from e
    return matrix_from_document(doc)


def load_matrix(path: PathLike) -> RatMatrix:
    A = matrix_from_document(_read_json(path), str(path))
    logger.debug("Loaded a %dx%d matrix from %s", A.rows, A.cols, path)
    return A


def dump_matrix(A: RatMatrix, path: PathLike):
    _write_json(matrix_to_document(A), path)
    logger.debug("Wrote a %dx%d matrix to %s", A.rows, A.cols, path)


def load_chain(path: PathLike) -> ChainDocument:
    document = ChainDocument.from_document(_read_json(path))
    logger.debug("Loaded a chain of lag %d from %s", document.chain.lag, path)
    return document


def dump_chain(document: ChainDocument, path: PathLike):
    _write_json(document.to_document(), path)
    logger.debug("Wrote a chain of lag %d to %s", document.chain.lag, path)
