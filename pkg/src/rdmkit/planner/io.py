"""
Text formats for the planner.

A term list holds one term per line: a coefficient followed by ladder
operators, ``k^`` for a creation and ``k`` for an annihilation on mode k::

    # comment
    0.7055696
    -1.25 0^ 0
    0.337 0^ 1^ 1 0
"""
import csv
import json

from ..fermion.operators import FermionOperatorSum


class TermListError(ValueError):
    pass


def parse_term_list(text):
    terms = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        head, *ops = line.split()
        try:
            coeff = complex(head.replace('i', 'j'))
        except ValueError:
            raise TermListError(f'line {lineno}: bad coefficient {head!r}') from None
        coeff = coeff.real if coeff.imag == 0 else coeff
        word = []
        for tok in ops:
            create = tok.endswith('^')
            idx = tok[:-1] if create else tok
            if not idx.isdigit():
                raise TermListError(f'line {lineno}: bad ladder operator {tok!r}')
            word.append((int(idx), int(create)))
        word = tuple(word)
        terms[word] = terms.get(word, 0.0) + coeff
    return FermionOperatorSum(terms)


def read_term_list(path):
    with open(path) as f:
        return parse_term_list(f.read())


def format_term_list(op):
    lines = []
    for word, c in sorted(op.terms.items(), key=lambda t: (len(t[0]), t[0])):
        c = complex(c)
        c = repr(c.real) if c.imag == 0 else f'{c.real!r}{c.imag:+.17g}i'
        lines.append(' '.join([c] + [f'{m}^' if a else str(m) for m, a in word]))
    return '\n'.join(lines) + '\n'


def write_term_list(path, op):
    with open(path, 'w') as f:
        f.write(format_term_list(op))


def pauli_label(word):
    return ' '.join(f'{p}{q}' for q, p in word) or 'I'


def write_plan_csv(path, rows):
    """rows: iterable of (term label, w, w_tilde, shots)."""
    with open(path, 'w', newline='') as f:
        out = csv.writer(f)
        out.writerow(['term', 'w', 'w_tilde', 'shots'])
        for label, w, wt, m in rows:
            out.writerow([label, repr(float(w)), repr(float(wt)), int(m)])


def write_summary_json(path, summary):
    with open(path, 'w') as f:
        json.dump(summary, f, indent=2, sort_keys=True)
