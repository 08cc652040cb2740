"""Univariate polynomials over the rationals, as sparse exponent->coefficient
dicts.  Used by the polynomial (Landau-Ginzburg style) backend, where the
carrier is k[x] (+) k[x]*eta and all arithmetic must stay exact and uncapped.
"""

from fractions import Fraction

from .scalars import rational


def normalize(p):
    return {e: c for e, c in p.items() if c != 0}


def from_coeff_map(m):
    """Build from {exponent: rational-ish}, e.g. parsed JSON {"3": "1"}."""
    out = {}
    for e, c in m.items():
        e = int(e)
        if e < 0:
            raise ValueError("negative exponent in polynomial")
        c = rational(c)
        if c != 0:
            out[e] = out.get(e, Fraction(0)) + c
    return normalize(out)


def add(p, q):
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, Fraction(0)) + c
    return normalize(out)


def scale(p, c):
    c = Fraction(c)
    if c == 0:
        return {}
    return {e: c * v for e, v in p.items()}


def mul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = e1 + e2
            out[e] = out.get(e, Fraction(0)) + c1 * c2
    return normalize(out)


def diff(p):
    return {e - 1: e * c for e, c in p.items() if e > 0}


def degree(p):
    """Degree of a nonzero polynomial; None for the zero polynomial."""
    p = normalize(p)
    return max(p) if p else None


def divmod_poly(p, d):
    """Exact polynomial division: p = q*d + r with deg r < deg d."""
    d = normalize(d)
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    dd = max(d)
    lead = d[dd]
    r = dict(normalize(p))
    q = {}
    while r and max(r) >= dd:
        e = max(r)
        c = r[e] / lead
        q[e - dd] = q.get(e - dd, Fraction(0)) + c
        for ed, cd in d.items():
            k = e - dd + ed
            r[k] = r.get(k, Fraction(0)) - c * cd
            if r[k] == 0:
                del r[k]
    return normalize(q), normalize(r)


def to_string(p):
    """Human form, highest power first: "3x^2 - 1/2x + 5"."""
    p = normalize(p)
    if not p:
        return "0"
    parts = []
    for e in sorted(p, reverse=True):
        c = p[e]
        if e == 0:
            term = str(c)
        else:
            xs = "x" if e == 1 else f"x^{e}"
            if c == 1:
                term = xs
            elif c == -1:
                term = f"-{xs}"
            else:
                term = f"{c}{xs}"
        parts.append(term)
    s = parts[0]
    for term in parts[1:]:
        s += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
    return s


def parse(text):
    """Parse "x^3", "x^4 + 2x^2", "-1/2x + 3" into a coefficient dict."""
    s = text.replace(" ", "").replace("**", "^").replace("*", "")
    if not s:
        raise ValueError("empty polynomial")
    # split into signed terms
    terms = []
    cur = ""
    for i, ch in enumerate(s):
        if ch in "+-" and i > 0 and s[i - 1] not in "+-/^":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    out = {}
    for t in terms:
        if not t or t in "+-":
            raise ValueError(f"bad polynomial term in {text!r}")
        sign = Fraction(1)
        if t[0] == "+":
            t = t[1:]
        elif t[0] == "-":
            sign = Fraction(-1)
            t = t[1:]
        if "x" in t:
            coeff_s, _, exp_s = t.partition("x")
            exp = 1
            if exp_s:
                if not exp_s.startswith("^"):
                    raise ValueError(f"bad polynomial term in {text!r}")
                exp = int(exp_s[1:])
            coeff = Fraction(coeff_s) if coeff_s else Fraction(1)
        else:
            exp = 0
            coeff = Fraction(t)
        out[exp] = out.get(exp, Fraction(0)) + sign * coeff
    return normalize(out)
