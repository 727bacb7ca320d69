"""
Reader for the line-oriented .sgp problem format

    problem <name>
    var <ident> [in [<lo>, <hi>]]
    minimize <expr>
    subject to
      <label>: <expr> <= <expr>

Expressions are +/- separated terms; a term is an optional coefficient
followed by '*'-separated factors ident^exponent. Lexing and parsing use
the PLY implementation of lex and yacc; newlines end statements.
"""
import logging
from typing import Dict, List, Optional, Tuple

import ply.lex as lex
import ply.yacc as yacc

from sgprelax.exceptions import (
    DuplicateVariable,
    NonPositiveBound,
    SgpSyntaxError,
    UndeclaredVariable,
)
from sgprelax.model import Constraint, Interval, Monomial, SgpProblem, Signomial, VarId

logger = logging.getLogger(__name__)

## LEX ---------------------------------

reserved = {
    "problem": "PROBLEM",
    "var": "VAR",
    "in": "IN",
    "minimize": "MINIMIZE",
    "min": "MINIMIZE",
    "subject": "SUBJECT",
    "to": "TO",
}

tokens = (
    "ID", "NUMBER", "NEWLINE",
    "PLUS", "MINUS", "TIMES", "POWER", "LE", "GE",
    "LPAREN", "RPAREN", "LBRACKET", "RBRACKET", "COMMA", "COLON",
) + tuple(sorted(set(reserved.values())))

t_PLUS = r"\+"
t_MINUS = r"-"
t_TIMES = r"\*"
t_POWER = r"\^"
t_LE = r"<="
t_GE = r">="
t_LPAREN = r"\("
t_RPAREN = r"\)"
t_LBRACKET = r"\["
t_RBRACKET = r"\]"
t_COMMA = r","
t_COLON = r":"

t_ignore = " \t\r"
t_ignore_COMMENT = r"\#[^\n]*"


def t_NUMBER(t):
    r"(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
    return t


def t_ID(t):
    r"[A-Za-z_][A-Za-z0-9_]*"
    t.type = reserved.get(t.value, "ID")
    return t


def t_NEWLINE(t):
    r"\n+"
    t.lexer.lineno += len(t.value)
    return t


def _column(data: str, lexpos: int) -> int:
    return lexpos - data.rfind("\n", 0, lexpos)


def t_error(t):
    raise SgpSyntaxError(
        f"unexpected character {t.value[0]!r}", t.lineno, _column(t.lexer.lexdata, t.lexpos)
    )


## PARSE -------------------------------

# Raw term: coefficient and (name, exponent, column) factors, names resolved later
_RawTerm = Tuple[float, List[Tuple[str, float, int]]]


class _Truncated(Exception):
    pass


def p_program(p):
    "program : statements"
    p[0] = p[1]


def p_statements(p):
    """statements : statements statement
                  | empty"""
    if len(p) == 3:
        p[0] = p[1] + ([p[2]] if p[2] is not None else [])
    else:
        p[0] = []


def p_empty(p):
    "empty :"
    p[0] = None


def p_statement_blank(p):
    "statement : NEWLINE"
    p[0] = None


def p_statement_problem(p):
    "statement : PROBLEM ID NEWLINE"
    p[0] = ("problem", p.lineno(1), _column(p.lexer.lexdata, p.lexpos(1)), p[2])


def p_statement_var(p):
    """statement : VAR ID NEWLINE
                 | VAR ID IN LBRACKET signed COMMA signed RBRACKET NEWLINE"""
    box = (p[5], p[7]) if len(p) == 10 else None
    p[0] = ("var", p.lineno(1), _column(p.lexer.lexdata, p.lexpos(1)), p[2], box)


def p_statement_minimize(p):
    "statement : MINIMIZE expression NEWLINE"
    p[0] = ("minimize", p.lineno(1), _column(p.lexer.lexdata, p.lexpos(1)), p[2])


def p_statement_subject(p):
    "statement : SUBJECT TO NEWLINE"
    p[0] = ("subject", p.lineno(1), _column(p.lexer.lexdata, p.lexpos(1)))


def p_statement_constraint(p):
    "statement : constraint NEWLINE"
    label, lhs, rhs = p[1]
    p[0] = ("constraint", p.lineno(2), 1, label, lhs, rhs)


def p_constraint_labeled(p):
    """constraint : ID COLON relation
                  | NUMBER COLON relation"""
    p[0] = (p[1],) + p[3]


def p_constraint(p):
    "constraint : relation"
    p[0] = (None,) + p[1]


def p_relation(p):
    """relation : expression LE expression
                | expression GE expression"""
    if p[2] == ">=":
        p[0] = (p[3], p[1])
    else:
        p[0] = (p[1], p[3])


def p_expression_term(p):
    "expression : term"
    p[0] = [p[1]]


def p_expression_signed_term(p):
    """expression : PLUS term
                  | MINUS term"""
    coef, factors = p[2]
    p[0] = [(-coef if p[1] == "-" else coef, factors)]


def p_expression_binop(p):
    """expression : expression PLUS term
                  | expression MINUS term"""
    coef, factors = p[3]
    p[0] = p[1] + [(-coef if p[2] == "-" else coef, factors)]


def p_term(p):
    "term : product"
    p[0] = p[1]


def p_term_juxtaposed(p):
    "term : NUMBER product"
    # coefficient written against its first factor, e.g. 2.5x1
    coef, factors = p[2]
    p[0] = (float(p[1]) * coef, factors)


def p_product(p):
    """product : factor
               | product TIMES factor"""
    if len(p) == 2:
        coef, factors = 1.0, []
        new = p[1]
    else:
        coef, factors = p[1]
        new = p[3]
    if isinstance(new, float):
        p[0] = (coef * new, factors)
    else:
        p[0] = (coef, factors + [new])


def p_factor_number(p):
    "factor : NUMBER"
    p[0] = float(p[1])


def p_factor_variable(p):
    """factor : ID
              | ID POWER exponent"""
    power = p[3] if len(p) == 4 else 1.0
    p[0] = (p[1], power, _column(p.lexer.lexdata, p.lexpos(1)))


def p_exponent(p):
    """exponent : signed
                | LPAREN signed RPAREN"""
    p[0] = p[1] if len(p) == 2 else p[2]


def p_signed(p):
    """signed : NUMBER
              | PLUS NUMBER
              | MINUS NUMBER"""
    if len(p) == 2:
        p[0] = float(p[1])
    else:
        p[0] = -float(p[2]) if p[1] == "-" else float(p[2])


def p_error(t):
    if t is None:
        raise _Truncated()
    column = _column(t.lexer.lexdata, t.lexpos)
    found = "end of line" if t.type == "NEWLINE" else t.value
    raise SgpSyntaxError(f"unexpected {found}", t.lineno, column)


_lexer = lex.lex()
_parser = yacc.yacc(write_tables=False, debug=False, errorlog=yacc.NullLogger())


class SgpParser:
    """Parses .sgp text into an SgpProblem"""

    def __init__(self):
        self.name = "unnamed"
        self.declared: Dict[str, Tuple[int, Interval]] = {}
        self.objective: Optional[Tuple[int, List[_RawTerm]]] = None
        self.constraints: List[Tuple[int, str, List[_RawTerm], List[_RawTerm]]] = []
        self.in_constraints = False

    def parse(self, text: str) -> SgpProblem:
        if not text.endswith("\n"):
            text += "\n"
        last_line = text.count("\n")
        lexer = _lexer.clone()
        lexer.lineno = 1
        try:
            statements = _parser.parse(text, lexer=lexer)
        except _Truncated:
            raise SgpSyntaxError("unexpected end of input", last_line) from None
        for statement in statements:
            self._apply(statement)
        if self.objective is None:
            raise SgpSyntaxError("missing minimize statement", max(last_line, 1))
        return self._build()

    def _apply(self, statement: tuple) -> None:
        kind, lineno, column = statement[:3]
        if kind in ("problem", "var") and self.in_constraints:
            raise SgpSyntaxError(f"unexpected {kind} after subject to", lineno, column)
        if kind == "problem":
            self.name = statement[3]
        elif kind == "var":
            self._declare(lineno, *statement[3:])
        elif kind == "minimize":
            if self.objective is not None:
                raise SgpSyntaxError("second objective", lineno, column)
            self.objective = (lineno, statement[3])
        elif kind == "subject":
            self.in_constraints = True
        else:
            if not self.in_constraints:
                raise SgpSyntaxError("constraint before subject to", lineno, column)
            label, lhs, rhs = statement[3:]
            label = label or f"c{len(self.constraints) + 1}"
            self.constraints.append((lineno, label, lhs, rhs))

    def _declare(self, lineno: int, name: str, box: Optional[Tuple[float, float]]) -> None:
        interval = Interval()
        if box is not None:
            lo, hi = box
            if lo <= 0 or hi < lo:
                raise NonPositiveBound(
                    f"line {lineno}: variable {name} needs 0 < lo <= hi, got [{lo}, {hi}]"
                )
            interval = Interval(lo, hi)
        if name in self.declared:
            raise DuplicateVariable(f"line {lineno}: variable {name} declared twice")
        self.declared[name] = (len(self.declared), interval)

    def _signomial(self, terms: List[_RawTerm], lineno: int) -> Signomial:
        monomials = []
        for coef, factors in terms:
            exps: Dict[int, float] = {}
            for name, power, column in factors:
                if name not in self.declared:
                    raise UndeclaredVariable(
                        f"line {lineno}, column {column}: variable {name} is not declared"
                    )
                index = self.declared[name][0]
                exps[index] = exps.get(index, 0.0) + power
            if coef != 0:
                monomials.append(Monomial.from_map(coef, exps))
        return Signomial.of(monomials)

    def _build(self) -> SgpProblem:
        variables = tuple(
            (VarId(index, name), box) for name, (index, box) in self.declared.items()
        )
        obj_line, obj_terms = self.objective
        objective = self._signomial(obj_terms, obj_line)
        constraints = tuple(
            Constraint(label, self._signomial(lhs, line), self._signomial(rhs, line))
            for line, label, lhs, rhs in self.constraints
        )
        if not variables:
            raise UndeclaredVariable("problem declares no variables")
        return SgpProblem(self.name, variables, objective, constraints)


def parse_problem(text: str) -> SgpProblem:
    """Parse .sgp text; raises SgpSyntaxError or a bound/variable error"""
    problem = SgpParser().parse(text)
    logger.debug(
        f"🔧 Parsed {problem.name}: {problem.n_vars} vars, "
        f"{len(problem.objective)} objective terms, {len(problem.constraints)} constraints"
    )
    return problem
