import json
import logging
from pathlib import Path

from pydantic import ValidationError

from src.models.cell_complex import Cell, EquivariantCellComplex, GroupRingElement
from src.schemas.space_file import BoundaryTerm, CellEntry, SpaceDocument
from src.services.complex_service import ComplexService
from src.utils.exceptions import InvalidComplexError, SpaceFileError

logger = logging.getLogger(__name__)


def space_to_document(X: EquivariantCellComplex) -> SpaceDocument:
    """Cells sorted by (dim, id); boundary terms sorted by cell id."""
    cells = sorted(X.cells, key=lambda cell: (cell.dim, cell.id))
    return SpaceDocument(
        cells=[CellEntry(id=cell.id, dim=cell.dim, orbit=cell.orbit) for cell in cells],
        boundary={
            cell.id: [
                BoundaryTerm(cell=target, a=c.a, b=c.b) for target, c in sorted(X.terms(cell.id))
            ]
            for cell in cells
            if X.terms(cell.id)
        },
    )


def space_from_document(document: SpaceDocument, name: str = "") -> EquivariantCellComplex:
    X = EquivariantCellComplex(
        cells=tuple(Cell(entry.id, entry.dim, entry.orbit) for entry in document.cells),
        boundary={
            cell_id: tuple((term.cell, GroupRingElement(term.a, term.b)) for term in terms)
            for cell_id, terms in document.boundary.items()
        },
        name=name,
    )
    problems = ComplexService.validate(X)
    if problems:
        raise InvalidComplexError(f"space '{name}' is not a valid Z2-CW complex: " + "; ".join(problems))
    return X


def dumps_space(X: EquivariantCellComplex) -> str:
    document = space_to_document(X).model_dump(mode="json")
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads_space(text: str, name: str = "") -> EquivariantCellComplex:
    try:
        document = SpaceDocument.model_validate_json(text)
    except ValidationError as e:
        raise SpaceFileError(f"malformed space file '{name}': {e}")
    return space_from_document(document, name=name)


def write_space(X: EquivariantCellComplex, path: str | Path):
    path = Path(path)
    path.write_text(dumps_space(X), encoding="utf-8")
    logger.info(f"wrote {X.name or 'space'} ({len(X.cells)} orbit cells) to {path}")


def read_space(path: str | Path) -> EquivariantCellComplex:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise SpaceFileError(f"cannot read space file {path}: {e}")
    return loads_space(text, name=path.stem)
