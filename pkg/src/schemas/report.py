from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field

Scalar = Union[str, int, bool, None]


class VerificationEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    # suite the entry belongs to, e.g. table5.2
    suite: str

    # what is being checked, e.g. "H^2(lens(2), Z(1))"
    name: str

    expected: str
    computed: str

    # soft entries are reported but never fail a run
    hard: bool = Field(default=True)

    passed: bool


class ReportDocument(BaseModel):
    """Body of every CLI report. Contains no timestamps so repeated runs are identical."""

    model_config = ConfigDict(extra="forbid")

    # sub-command name
    command: str

    # parsed arguments echoed back
    inputs: dict[str, Scalar] = Field(default_factory=dict)

    # groups rendered rank first, e.g. "Z^2 ⊕ Z_2 ⊕ Z_4"
    results: dict[str, Union[str, list[str]]] = Field(default_factory=dict)

    # stability and exactness certificates
    certificates: dict[str, bool] = Field(default_factory=dict)

    verdicts: list[VerificationEntry] = Field(default_factory=list)

    # discrepancy flags and documented conventions
    notes: list[str] = Field(default_factory=list)

    summary: Optional[str] = Field(default=None)

    @property
    def hard_failures(self) -> list[VerificationEntry]:
        return [entry for entry in self.verdicts if entry.hard and not entry.passed]
