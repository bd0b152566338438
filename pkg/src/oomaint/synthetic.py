"""Synthetic multi-version Java projects for demos and regression tests.

The history has three releases of a small hand-written application. Release
``v2`` also ships a package of machine-generated lexer code: long chains of
boolean conditions and a large dispatch switch. That one package carries
most of the technical debt of every release that contains it.
"""

from __future__ import annotations

from pathlib import Path

GENERATED_PACKAGE = "app.generated"
VERSIONS = ("v1", "v2", "v3")


def _service_class(package: str, name: str, n_methods: int, seed: int) -> str:
    lines = [f"package {package};", "", "/** Hand-written service. */", f"public class {name} {{"]
    lines.append("    private int total;")
    lines.append("    private int count;")
    lines.append("")
    for k in range(n_methods):
        a = seed + k
        lines.append(f"    public int step{k}(int x) {{")
        lines.append(f"        int y = x * {a % 7 + 2} + total;")
        lines.append(f"        if (y > {a * 3}) {{")
        lines.append("            count = count + 1;")
        lines.append("        }")
        lines.append("        total = total + y;")
        lines.append("        return y;")
        lines.append("    }")
        lines.append("")
    lines.append("    public int average() {")
    lines.append("        return count == 0 ? 0 : total / count;")
    lines.append("    }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _validator_class(package: str, name: str) -> str:
    # one expression just over the operator limit
    return "\n".join([
        f"package {package};",
        "",
        f"public class {name} {{",
        "    public boolean valid(int a, int b, int c) {",
        "        return a > 0 && b > 0 && c > 0 || a == b || c == 0;",
        "    }",
        "}",
    ]) + "\n"


def _generated_lexer(package: str, n_states: int) -> str:
    lines = [f"package {package};", "", "public class GeneratedLexer {", "    private int state;", ""]
    for k in range(n_states):
        lines.append(f"    public boolean accept{k}(int c) {{")
        lines.append(
            f"        return c == {k} && state != {k + 1} || c > {k + 2} && c < {k + 40}"
            f" || state == {k} && c != {k + 3} || c == {k + 4} && state > 0;"
        )
        lines.append("    }")
        lines.append("")
    lines.append("    public int dispatch(int c) {")
    lines.append("        switch (c) {")
    for k in range(n_states):
        lines.append(f"            case {k}: state = {k + 1}; break;")
    lines.append("            default: state = 0;")
    lines.append("        }")
    lines.append("        return state;")
    lines.append("    }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def version_sources(version: str, generated_states: int = 12) -> dict[str, str]:
    """Relative path -> source text for one release."""
    if version not in VERSIONS:
        raise ValueError(f"unknown version {version!r}")
    release = VERSIONS.index(version)
    files = {
        "app/core/Ledger.java": _service_class("app.core", "Ledger", 3, 1),
        "app/core/Accounts.java": _service_class("app.core", "Accounts", 2, 5),
        "app/core/Validator.java": _validator_class("app.core", "Validator"),
        "app/ui/Screen.java": _service_class("app.ui", "Screen", 2, 9),
    }
    for r in range(release):
        files[f"app/ui/Panel{r}.java"] = _service_class("app.ui", f"Panel{r}", 2, 20 + r)
    if release >= 1:
        files["app/generated/GeneratedLexer.java"] = _generated_lexer(GENERATED_PACKAGE, generated_states)
    return files


def write_history(root, generated_states: int = 12) -> Path:
    """Write all releases under ``root`` plus a ``manifest.tsv``; returns the manifest path."""
    root = Path(root)
    manifest_lines = []
    for version in VERSIONS:
        for rel, text in version_sources(version, generated_states).items():
            path = root / version / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        manifest_lines.append(f"{version}\t{version}")
    manifest = root / "manifest.tsv"
    manifest.write_text("\n".join(manifest_lines) + "\n", encoding="utf-8")
    return manifest
