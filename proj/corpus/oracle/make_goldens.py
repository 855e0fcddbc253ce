# SPDX-License-Identifier: Apache-2.0
#
# Independent oracle for the arithmetic-heavy corpus goldens. Uses Python
# big integers for the wrapping arithmetic and numpy for 32-bit float
# semantics; shares no code with the interpreter. Regenerate with:
#
#   python3 corpus/oracle/make_goldens.py
#
# The remaining goldens in ../golden are hand-executed; see ../README.md.

import pathlib

import numpy as np

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "golden"


def wrap(value, bits, signed):
    m = 1 << bits
    r = value % m
    if signed and r >= m // 2:
        r -= m
    return r


def trunc_div(a, b):
    q = abs(a) // abs(b)
    return q if (a < 0) == (b < 0) else -q


def trunc_mod(a, b):
    return a - trunc_div(a, b) * b


def f32(x):
    return np.float32(x)


def render_f32(x):
    s = str(np.float32(x))
    if "." not in s and "e" not in s and "inf" not in s and "nan" not in s:
        s += ".0"
    return s


def render_f64(x):
    s = repr(float(x))
    if "." not in s and "e" not in s and "inf" not in s and "nan" not in s:
        s += ".0"
    return s


def emit(name, rows):
    text = "".join(f"{n} : {t} = {v}\n" for n, t, v in sorted(rows))
    (GOLDEN / name).write_text(text)
    print(f"wrote {name}")


def golden_02():
    s8 = wrap(100 + 100, 8, True)
    s16 = wrap(30000 + 30000, 16, True)
    s32 = wrap(2000000000 + 2000000000, 32, True)
    s64 = wrap(9000000000000000000 + 9000000000000000000, 64, True)
    q = trunc_div(-17, 5)
    r = trunc_mod(-17, 5)
    emit("02_int_signed.golden", [
        ("MAIN.q", "INT", q), ("MAIN.r", "INT", r),
        ("MAIN.s16", "INT", s16), ("MAIN.s32", "DINT", s32),
        ("MAIN.s64", "LINT", s64), ("MAIN.s8", "SINT", s8),
    ])


def golden_03():
    u8 = wrap(200 + 100, 8, False)
    u16 = wrap(60000 + 10000, 16, False)
    u32 = wrap(4000000000 + 1000000000, 32, False)
    u64 = wrap(18000000000000000000 + 1000000000000000000, 64, False)
    m = wrap(u16 * 3, 16, False)
    emit("03_int_unsigned.golden", [
        ("MAIN.m", "UINT", m), ("MAIN.u16", "UINT", u16),
        ("MAIN.u32", "UDINT", u32), ("MAIN.u64", "ULINT", u64),
        ("MAIN.u8", "USINT", u8),
    ])


def golden_04():
    r = f32(f32(1.5) * f32(4.0))
    l = 2.25 + 0.125
    half = f32(r / f32(12.0))
    third = 1.0 / 3.0
    prod = l * third
    emit("04_real_arith.golden", [
        ("MAIN.half", "REAL", render_f32(half)),
        ("MAIN.l", "LREAL", render_f64(l)),
        ("MAIN.prod", "LREAL", render_f64(prod)),
        ("MAIN.r", "REAL", render_f32(r)),
        ("MAIN.third", "LREAL", render_f64(third)),
    ])


def golden_19():
    n, steps = 100, 0
    while n > 1:
        n = n // 2 if n % 2 == 0 else 3 * n + 1
        steps += 1
    emit("19_while.golden", [("MAIN.n", "INT", n), ("MAIN.steps", "INT", steps)])


def golden_37():
    a = 2 + 3 * 4
    b = (2 + 3) * 4
    c = (2 ** 3) ** 2          # ** associates left
    d = (-2) ** 2              # unary minus binds tighter than **
    e = (1 + 1 == 2) and (2 * 2 > 3)
    f = ((not False) and False) or True
    g = (1 < 2) and (3 <= 3) and (4 != 5)
    emit("37_precedence.golden", [
        ("MAIN.a", "INT", a), ("MAIN.b", "INT", b), ("MAIN.c", "INT", c),
        ("MAIN.d", "INT", d),
        ("MAIN.e", "BOOL", "TRUE" if e else "FALSE"),
        ("MAIN.f", "BOOL", "TRUE" if f else "FALSE"),
        ("MAIN.g", "BOOL", "TRUE" if g else "FALSE"),
    ])


def golden_38():
    def scale(raw, lo, hi):
        span = f32(f32(hi) - f32(lo))
        return f32(f32(lo) + f32(f32(span * f32(raw)) / f32(32767.0)))

    emit("38_scaling.golden", [
        ("MAIN.full", "REAL", render_f32(scale(32767, 4.0, 20.0))),
        ("MAIN.mid", "REAL", render_f32(scale(16384, 0.0, 100.0))),
        ("MAIN.zero", "REAL", render_f32(scale(0, 4.0, 20.0))),
    ])


if __name__ == "__main__":
    golden_02()
    golden_03()
    golden_04()
    golden_19()
    golden_37()
    golden_38()
