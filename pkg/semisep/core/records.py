"""
Report data structures passed between the pipeline stages.
"""
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional


@dataclass
class BlowupRecord:
    index: int
    chart: str
    center: List[str]
    exceptional: str
    children: List[str]
    at_infinity: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BlowupRecord":
        return cls(**data)


@dataclass
class WallReport:
    wall: str
    kind: str
    charts: List[str]
    shadows_separable: bool
    counter_shadows_separable: bool
    verdict: bool
    via: str
    odd: Optional[bool] = None
    even: Optional[bool] = None
    soo_agrees: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "WallReport":
        return cls(**data)


@dataclass
class ObstructionEntry:
    """One entry of the obstruction list: a wall curve or a point on one."""

    kind: str
    name: str
    meets: List[str]
    shadows_separable: bool
    parent: Optional[str] = None
    location: Optional[List[str]] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ObstructionEntry":
        return cls(**data)


@dataclass
class DegreeTrial:
    degree: int
    feasible: bool
    seconds: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class OracleReport:
    samples_a: int
    samples_b: int
    trials: List[DegreeTrial] = field(default_factory=list)
    first_feasible: Optional[int] = None
    certificate: Optional[str] = None
    margin: Optional[str] = None
    agreement: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "OracleReport":
        data = dict(data)
        data["trials"] = [DegreeTrial(**t) for t in data.get("trials", [])]
        return cls(**data)


@dataclass
class Verdict:
    generic: bool
    strict: Optional[bool]
    obstruction: Optional[Dict[str, Any]] = None
    blowup_log: List[BlowupRecord] = field(default_factory=list)
    wall_reports: List[WallReport] = field(default_factory=list)
    obstruction_list: List[ObstructionEntry] = field(default_factory=list)
    quick_accept: bool = False
    nullspace_meets: Optional[bool] = None

    def __post_init__(self):
        if self.strict and not self.generic:
            raise ValueError("a strictly separable pair is generically separable")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Verdict":
        data = dict(data)
        data["blowup_log"] = [BlowupRecord.from_dict(b) for b in data.get("blowup_log", [])]
        data["wall_reports"] = [WallReport.from_dict(w) for w in data.get("wall_reports", [])]
        data["obstruction_list"] = [ObstructionEntry.from_dict(e) for e in data.get("obstruction_list", [])]
        return cls(**data)


@dataclass
class Report:
    scene: str
    mode: str
    status: int
    verdict: Optional[Verdict] = None
    oracle: Optional[OracleReport] = None
    error: Optional[Dict[str, Any]] = None
    timing: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Report":
        data = dict(data)
        if data.get("verdict") is not None:
            data["verdict"] = Verdict.from_dict(data["verdict"])
        if data.get("oracle") is not None:
            data["oracle"] = OracleReport.from_dict(data["oracle"])
        data.setdefault("timing", {})
        return cls(**data)
