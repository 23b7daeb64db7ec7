"""Reader and writer for semicolon-delimited `.pb` budgeting files.

The format has three sections, each introduced by a bare header line::

    META
    key;value
    budget;1000
    ...
    PROJECTS
    project_id;cost;...
    p1;100;...
    VOTES
    voter_id;vote;...
    v1;p1,p2;...

Only approval ballots are supported: the ``vote`` column holds a
comma-separated list of project ids.  Unknown meta keys and extra columns are
preserved verbatim so that files survive a parse/write cycle.  All failures
raise :class:`PabulibParseError` with a line number; the parser never leaks a
bare exception on malformed input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .core import ApprovalProfile, PBInstance, Project

REQUIRED_META = ("budget", "num_projects", "num_votes")


class PabulibParseError(ValueError):
    """Malformed `.pb` content; carries the offending line number."""

    def __init__(self, line: Optional[int], message: str):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.line = line


@dataclass(frozen=True)
class PabulibFile:
    """Verbatim file content: meta mapping plus raw section rows."""

    meta: tuple[tuple[str, str], ...]
    project_columns: tuple[str, ...]
    projects: tuple[tuple[str, ...], ...]
    vote_columns: tuple[str, ...]
    votes: tuple[tuple[str, ...], ...]

    def meta_dict(self) -> dict[str, str]:
        return dict(self.meta)


def _decimal_fraction(text: str, line: int, what: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise PabulibParseError(line, f"malformed decimal {text!r} for {what}")
    return value


def _split_sections(text: str) -> dict[str, tuple[int, list[tuple[int, str]]]]:
    sections: dict[str, tuple[int, list[tuple[int, str]]]] = {}
    current: Optional[str] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if line in ("META", "PROJECTS", "VOTES"):
            if line in sections:
                raise PabulibParseError(lineno, f"duplicate section {line}")
            sections[line] = (lineno, [])
            current = line
            continue
        if not line.strip():
            continue
        if current is None:
            raise PabulibParseError(lineno, "content before any section header")
        sections[current][1].append((lineno, line))
    for name in ("META", "PROJECTS", "VOTES"):
        if name not in sections:
            raise PabulibParseError(None, f"missing section {name}")
    return sections


def _parse_table(rows: list[tuple[int, str]], section: str
                 ) -> tuple[tuple[str, ...], list[tuple[int, tuple[str, ...]]]]:
    if not rows:
        raise PabulibParseError(None, f"section {section} has no header row")
    header_line, header = rows[0]
    columns = tuple(h.strip() for h in header.split(";"))
    data = []
    for lineno, line in rows[1:]:
        cells = tuple(c.strip() for c in line.split(";"))
        if len(cells) != len(columns):
            raise PabulibParseError(
                lineno, f"{section} row has {len(cells)} cells, "
                f"header (line {header_line}) has {len(columns)}")
        data.append((lineno, cells))
    return columns, data


def parse_pb(text: str) -> tuple[PBInstance, ApprovalProfile, PabulibFile]:
    """Parse `.pb` content into the domain model plus the verbatim file."""
    sections = _split_sections(text)

    meta: list[tuple[str, str]] = []
    seen_keys = set()
    for lineno, line in sections["META"][1]:
        parts = line.split(";")
        if len(parts) != 2:
            raise PabulibParseError(lineno, f"META row needs key;value, got {line!r}")
        key, value = parts[0].strip(), parts[1].strip()
        if key == "key" and value == "value" and not meta:
            continue  # optional header row
        if key in seen_keys:
            raise PabulibParseError(lineno, f"duplicate meta key {key!r}")
        seen_keys.add(key)
        meta.append((key, value))
    meta_map = dict(meta)

    for key in REQUIRED_META:
        if key not in meta_map:
            raise PabulibParseError(None, f"META is missing required key {key!r}")
    vote_type = meta_map.get("vote_type", "approval")
    if vote_type != "approval":
        raise PabulibParseError(
            None, f"unsupported vote_type {vote_type!r}: only approval "
            "ballots are supported")
    budget = _decimal_fraction(meta_map["budget"], None, "budget")
    if budget <= 0:
        raise PabulibParseError(None, f"budget must be positive, got {budget}")

    pcols, prows = _parse_table(sections["PROJECTS"][1], "PROJECTS")
    for needed in ("project_id", "cost"):
        if needed not in pcols:
            raise PabulibParseError(None, f"PROJECTS is missing column {needed!r}")
    id_col, cost_col = pcols.index("project_id"), pcols.index("cost")
    projects = []
    for lineno, cells in prows:
        pid = cells[id_col]
        cost = _decimal_fraction(cells[cost_col], lineno, f"project {pid!r}")
        if cost <= 0:
            raise PabulibParseError(
                lineno, f"project {pid!r} has non-positive cost {cells[cost_col]}")
        projects.append(Project(pid, cost))
    known = {p.id for p in projects}
    if len(known) != len(projects):
        raise PabulibParseError(None, "duplicate project ids in PROJECTS")
    if int(meta_map["num_projects"]) != len(projects):
        raise PabulibParseError(
            None, f"num_projects={meta_map['num_projects']} but "
            f"PROJECTS has {len(projects)} rows")

    vcols, vrows = _parse_table(sections["VOTES"][1], "VOTES")
    for needed in ("voter_id", "vote"):
        if needed not in vcols:
            raise PabulibParseError(None, f"VOTES is missing column {needed!r}")
    vote_col = vcols.index("vote")
    ballots = []
    for lineno, cells in vrows:
        field = cells[vote_col]
        ids = [s.strip() for s in field.split(",") if s.strip()] if field else []
        for pid in ids:
            if pid not in known:
                raise PabulibParseError(
                    lineno, f"vote references unknown project id {pid!r}")
        ballots.append(frozenset(ids))
    if int(meta_map["num_votes"]) != len(ballots):
        raise PabulibParseError(
            None, f"num_votes={meta_map['num_votes']} but VOTES has "
            f"{len(ballots)} rows")

    instance = PBInstance(tuple(projects), budget)
    profile = ApprovalProfile(tuple(ballots))
    pab = PabulibFile(tuple(meta), pcols, tuple(c for _, c in prows),
                      vcols, tuple(c for _, c in vrows))
    return instance, profile, pab


def format_decimal(value: Fraction) -> str:
    """Shortest exact decimal representation of a rational.

    Raises ValueError when the value has no finite decimal expansion.
    """
    value = Fraction(value)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        raise ValueError(f"{value} has no finite decimal representation")
    places = max(twos, fives)
    scaled = value.numerator * 10 ** places // value.denominator
    if places == 0:
        return str(scaled)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def write_pb(instance: PBInstance, profile: ApprovalProfile,
             meta: Optional[Mapping[str, str]] = None) -> str:
    """Serialize an instance/profile pair to `.pb` text.

    The required meta keys (budget, num_projects, num_votes, vote_type) are
    derived from the data; supplying a conflicting value is an error.  Extra
    meta keys are written after the derived ones, in the given order.
    """
    derived = {
        "budget": format_decimal(instance.budget),
        "num_projects": str(len(instance.projects)),
        "num_votes": str(profile.n_voters),
        "vote_type": "approval",
    }
    extra = []
    for key, value in (meta or {}).items():
        if key in derived:
            if str(value) != derived[key]:
                raise ValueError(
                    f"meta key {key!r} is derived from the data "
                    f"({derived[key]}); conflicting value {value!r}")
            continue
        extra.append((key, str(value)))
    profile.validate(instance)

    lines = ["META", "key;value"]
    lines += [f"{k};{v}" for k, v in derived.items()]
    lines += [f"{k};{v}" for k, v in extra]
    lines.append("PROJECTS")
    lines.append("project_id;cost")
    for p in instance.projects:
        lines.append(f"{p.id};{format_decimal(p.cost)}")
    lines.append("VOTES")
    lines.append("voter_id;vote")
    for i, ballot in enumerate(profile.ballots):
        lines.append(f"{i};{','.join(sorted(ballot))}")
    return "\n".join(lines) + "\n"
