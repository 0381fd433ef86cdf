#!/usr/bin/env python3
"""Regenerates core/src/unicode_tables.inc from Python's unicodedata.

The preprocessor needs four code-point classes:
  space     whitespace (token boundaries, collapsed to single ' ')
  punctsym  categories P* and S*, deleted
  control   Cc/Cf that are not whitespace, replaced by ' '
  digit     category Nd, deleted
plus the full case-folding map (str.casefold applied per code point).

Run from the repository root:  python3 scripts/gen_unicode_tables.py
"""

import sys
import unicodedata

OUT = "core/src/unicode_tables.inc"
MAX_CP = 0x110000


def ranges(pred):
    out = []
    lo = None
    for cp in range(MAX_CP):
        if pred(cp):
            if lo is None:
                lo = cp
        else:
            if lo is not None:
                out.append((lo, cp - 1))
                lo = None
    if lo is not None:
        out.append((lo, MAX_CP - 1))
    return out


def is_space(cp):
    return chr(cp).isspace()


def cat(cp):
    return unicodedata.category(chr(cp))


def emit_ranges(f, name, rs):
    f.write(f"inline constexpr Range {name}[] = {{\n")
    for i in range(0, len(rs), 6):
        row = ", ".join(f"{{0x{lo:X}, 0x{hi:X}}}" for lo, hi in rs[i : i + 6])
        f.write(f"    {row},\n")
    f.write("};\n\n")


def main():
    space = ranges(is_space)
    punctsym = ranges(lambda cp: cat(cp)[0] in "PS" and not is_space(cp))
    control = ranges(lambda cp: cat(cp) in ("Cc", "Cf") and not is_space(cp))
    digit = ranges(lambda cp: cat(cp) == "Nd")

    folds = []
    for cp in range(MAX_CP):
        ch = chr(cp)
        folded = ch.casefold()
        if folded != ch:
            cps = [ord(c) for c in folded]
            assert len(cps) <= 3, hex(cp)
            while len(cps) < 3:
                cps.append(0)
            folds.append((cp, cps))

    with open(OUT, "w") as f:
        f.write("// Generated by scripts/gen_unicode_tables.py")
        f.write(f" (Unicode {unicodedata.unidata_version}). Do not edit.\n\n")
        emit_ranges(f, "kSpaceRanges", space)
        emit_ranges(f, "kPunctSymRanges", punctsym)
        emit_ranges(f, "kControlRanges", control)
        emit_ranges(f, "kDigitRanges", digit)
        f.write(f"inline constexpr FoldEntry kFoldTable[] = {{\n")
        for i in range(0, len(folds), 3):
            row = ", ".join(
                f"{{0x{cp:X}, {{0x{a:X}, 0x{b:X}, 0x{c:X}}}}}"
                for cp, (a, b, c) in folds[i : i + 3]
            )
            f.write(f"    {row},\n")
        f.write("};\n")

    print(
        f"wrote {OUT}: {len(space)} space, {len(punctsym)} punct/sym, "
        f"{len(control)} control, {len(digit)} digit ranges, {len(folds)} folds",
        file=sys.stderr,
    )


if __name__ == "__main__":
    main()
