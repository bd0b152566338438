"""Walk a source tree and assemble a :class:`Snapshot`."""

from __future__ import annotations

import fnmatch
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..model import ClassNode, PackageNode, Snapshot
from .lexer import LexError, tokenize
from .parser import FileParser, ParseError


@dataclass(frozen=True)
class ParseOptions:
    ext: str = ".java"
    encoding: str = "utf-8"
    exclude: tuple[str, ...] = field(default_factory=tuple)

    def excluded(self, rel_path: str) -> bool:
        return any(fnmatch.fnmatch(rel_path, pat) for pat in self.exclude)


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str  # warning | error
    file: str
    line: int
    message: str

    def __str__(self) -> str:
        return f"{self.file}:{self.line}: {self.severity}: {self.message}"


@dataclass
class FileResult:
    path: str
    package: str = ""
    classes: list[ClassNode] = field(default_factory=list)
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)


def parse_source(source: str, path: str = "<string>") -> FileResult:
    """Parse one compilation unit. A file-level failure yields no classes and one error."""
    result = FileResult(path)
    try:
        tokens, comments = tokenize(source)
        parser = FileParser(tokens, comments, path)
        parser.parse()
    except (LexError, ParseError) as exc:
        result.diagnostics.append(ParseDiagnostic("error", path, exc.line, f"file skipped: {exc}"))
        return result
    except RecursionError:
        result.diagnostics.append(ParseDiagnostic("error", path, 0, "file skipped: nesting too deep"))
        return result
    result.package = parser.package
    result.classes = parser.classes
    result.diagnostics.extend(ParseDiagnostic("warning", path, ln, msg) for ln, msg in parser.warnings)
    result.diagnostics.extend(ParseDiagnostic("error", path, ln, msg) for ln, msg in parser.errors)
    result.diagnostics.sort(key=lambda d: (d.line, d.severity, d.message))
    return result


def _parse_file(args: tuple[str, str, str]) -> FileResult:
    abs_path, rel_path, encoding = args
    try:
        with open(abs_path, encoding=encoding) as fh:
            source = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        return FileResult(rel_path, diagnostics=[ParseDiagnostic("error", rel_path, 0, f"file skipped: {exc}")])
    return parse_source(source, rel_path)


def source_files(root: Path, options: ParseOptions) -> list[tuple[str, str]]:
    """(absolute, root-relative posix) paths of every source file, sorted by relative path."""
    found = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for name in filenames:
            if not name.endswith(options.ext):
                continue
            abs_path = os.path.join(dirpath, name)
            rel = Path(abs_path).relative_to(root).as_posix()
            if not options.excluded(rel):
                found.append((abs_path, rel))
    return sorted(found, key=lambda p: p[1])


def parse_tree(
    root, options: Optional[ParseOptions] = None, jobs: int = 1, version_label: str = ""
) -> tuple[Snapshot, list[ParseDiagnostic]]:
    """Parse every matching file under ``root`` into one snapshot.

    Files may be parsed in parallel; results are merged in path order so
    the snapshot and diagnostics do not depend on ``jobs``.
    """
    options = options or ParseOptions()
    root = Path(root)
    if not root.is_dir() or not os.access(root, os.R_OK | os.X_OK):
        raise OSError(f"cannot read source root: {root}")
    work = [(a, r, options.encoding) for a, r in source_files(root, options)]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_parse_file, work, chunksize=max(1, len(work) // (jobs * 4))))
    else:
        results = [_parse_file(w) for w in work]

    diagnostics: list[ParseDiagnostic] = []
    packages: dict[str, list[ClassNode]] = {}
    seen: dict[str, str] = {}
    for res in results:
        diagnostics.extend(res.diagnostics)
        for cls in res.classes:
            if cls.qualified_name in seen:
                diagnostics.append(
                    ParseDiagnostic(
                        "error", res.path, cls.line,
                        f"duplicate class {cls.qualified_name} (first declared in {seen[cls.qualified_name]}); skipped",
                    )
                )
                continue
            seen[cls.qualified_name] = res.path
            packages.setdefault(res.package, []).append(cls)
    snapshot = Snapshot(
        version_label=version_label,
        packages=tuple(PackageNode(name, tuple(classes)) for name, classes in packages.items()),
        source_root=str(root),
    )
    return snapshot, diagnostics
