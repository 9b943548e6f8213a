#!/usr/bin/env python3
# Copyright 2026 The ABRW Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Convert a LINQS citation dataset (<name>.content, <name>.cites) into the
edges.txt / attributes.txt / labels.txt layout read by `abrw`.

.content rows are `<id> <w_1> ... <w_m> <label>` with binary word flags.
.cites rows are `<cited> <citing>`; they are written as `<citing> <cited>`.
Self-citations and repeated rows are dropped and counted on stderr, since the
edge-list loader rejects self-loops.
"""

import argparse
import pathlib
import sys


def convert(content: pathlib.Path, cites: pathlib.Path, out: pathlib.Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    dim = None
    with content.open() as src, (out / "attributes.txt").open("w") as attrs, (out / "labels.txt").open("w") as labels:
        rows = [line.split() for line in src if line.strip()]
        for fields in rows:
            if len(fields) < 3:
                sys.exit(f"{content}: row with fewer than three fields")
            width = len(fields) - 2
            if dim is None:
                dim = width
                attrs.write(f"@dim {dim}\n")
            elif width != dim:
                sys.exit(f"{content}: rows disagree on attribute count ({width} vs {dim})")
            node, flags, label = fields[0], fields[1:-1], fields[-1]
            nonzero = [f"{k}:{v}" for k, v in enumerate(flags) if float(v) != 0.0]
            attrs.write(" ".join([node] + nonzero) + "\n")
            labels.write(f"{node} {label}\n")

    seen = set()
    self_loops = repeats = 0
    with cites.open() as src, (out / "edges.txt").open("w") as edges:
        for line in src:
            fields = line.split()
            if not fields:
                continue
            if len(fields) != 2:
                sys.exit(f"{cites}: expected two ids per row, got {line!r}")
            cited, citing = fields
            if cited == citing:
                self_loops += 1
                continue
            if (citing, cited) in seen:
                repeats += 1
                continue
            seen.add((citing, cited))
            edges.write(f"{citing} {cited}\n")
    print(f"{len(seen)} links, {self_loops} self-citations dropped, {repeats} repeated rows dropped", file=sys.stderr)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("content", type=pathlib.Path)
    parser.add_argument("cites", type=pathlib.Path)
    parser.add_argument("output_dir", type=pathlib.Path)
    args = parser.parse_args()
    convert(args.content, args.cites, args.output_dir)


if __name__ == "__main__":
    main()
