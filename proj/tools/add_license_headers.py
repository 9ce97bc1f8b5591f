#!/usr/bin/env python3
# Copyright 2026 The MGPC Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Prepends the project license header to source, build and doc files.

Usage: add_license_headers.py LICENSE_TEXT [ROOT]

LICENSE_TEXT holds the header as // comment lines. Files that already carry
the copyright line are left alone, so the script can be rerun.
"""

import pathlib
import sys

SOURCE_DIRS = ["include", "src", "tests", "tools"]
TOP_LEVEL = ["CMakeLists.txt", "README.md"]


def comment_styles(header_lines):
    bare = [line[2:] if line.startswith("//") else line for line in header_lines]
    bare = [b[1:] if b.startswith(" ") else b for b in bare]
    return {
        "cpp": "\n".join(header_lines) + "\n\n",
        "hash": "\n".join(("# " + b) if b else "#" for b in bare) + "\n\n",
        "markdown": "<!--\n" + "\n".join(bare) + "\n-->\n\n",
    }


def style_for(path):
    if path.suffix in {".cc", ".h", ".cpp", ".hpp"}:
        return "cpp"
    if path.name == "CMakeLists.txt" or path.suffix in {".cmake", ".py", ".sh"}:
        return "hash"
    if path.suffix == ".md":
        return "markdown"
    return None


def main():
    header_lines = pathlib.Path(sys.argv[1]).read_text().rstrip("\n").splitlines()
    root = pathlib.Path(sys.argv[2] if len(sys.argv) > 2 else ".")
    marker = header_lines[0][2:].strip()
    styles = comment_styles(header_lines)
    paths = [root / name for name in TOP_LEVEL]
    for d in SOURCE_DIRS:
        paths.extend(sorted((root / d).rglob("*")))
    changed = 0
    for path in paths:
        if not path.is_file():
            continue
        style = style_for(path)
        if style is None:
            continue
        text = path.read_text()
        if marker in text.split("\n\n", 1)[0] or marker in "\n".join(text.splitlines()[:3]):
            continue
        if text.startswith("#!"):
            shebang, rest = text.split("\n", 1)
            path.write_text(shebang + "\n" + styles[style] + rest)
        else:
            path.write_text(styles[style] + text)
        changed += 1
    print(f"added headers to {changed} files")


if __name__ == "__main__":
    main()
