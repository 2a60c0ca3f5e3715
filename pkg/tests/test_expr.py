"""Expression language: grammar, differentiation, simplification,
evaluation, and the documented error taxonomy."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wcurv import expr as ex


# ---------------------------------------------------------------------------
# parsing

def test_parse_quotient_of_product():
    tree = ex.parse("2*M/r")
    assert tree == ex.Div(ex.Prod((ex.Const(2.0), ex.Sym("M"))), ex.Sym("r"))


def test_parse_negated_schwarzschild_factor():
    tree = ex.parse("-(1-2*M/r)")
    inner = ex.Sum((ex.Const(1.0),
                    ex.Neg(ex.Div(ex.Prod((ex.Const(2.0), ex.Sym("M"))),
                                  ex.Sym("r")))))
    assert tree == ex.Neg(inner)


def test_power_binds_tighter_than_product():
    tree = ex.parse("r^2*sin(theta)^2")
    assert tree == ex.Prod((
        ex.Pow(ex.Sym("r"), ex.Const(2.0)),
        ex.Pow(ex.Call("sin", ex.Sym("theta")), ex.Const(2.0)),
    ))


def test_power_right_associative():
    assert ex.parse("2^3^2") == ex.parse("2^(3^2)")
    assert ex.evaluate(ex.parse("2^3^2"), {}) == 512.0


def test_unary_minus_precedence():
    # unary minus binds looser than ^: -x^2 is -(x^2)
    assert ex.evaluate(ex.parse("-3^2"), {}) == -9.0


def test_scientific_literals():
    assert ex.evaluate(ex.parse("1e-3 + 0.5"), {}) == pytest.approx(0.5010)


@pytest.mark.parametrize("bad", [
    "", "2***x", "(1+2", "sin()", "frob(x)", "1..5", "x +", "2 3",
])
def test_parse_errors_carry_position(bad):
    with pytest.raises(ex.ParseError) as err:
        ex.parse(bad)
    assert err.value.position >= 0


def test_unknown_function_rejected():
    with pytest.raises(ex.ParseError):
        ex.parse("sec(x)")


# ---------------------------------------------------------------------------
# differentiation

def test_power_rule():
    d = ex.simplify(ex.differentiate(ex.parse("r^2"), "r"))
    assert ex.evaluate(d, {"r": 3.0}) == 6.0


def test_quotient_rule_matches_closed_form():
    d = ex.differentiate(ex.parse("2*M/r"), "r")
    for r in (1.0, 2.5, 4.0):
        assert ex.evaluate(d, {"M": 1.0, "r": r}) == pytest.approx(-2.0 / r**2)


def test_fractional_power_rule():
    d = ex.differentiate(ex.parse("t^(2/3)"), "t")
    assert ex.evaluate(d, {"t": 1.0}) == pytest.approx(2.0 / 3.0, rel=1e-12)


def test_other_symbols_treated_as_constants():
    d = ex.simplify(ex.differentiate(ex.parse("M*r + Q"), "r"))
    assert d == ex.Sym("M")


def test_third_derivatives_never_error():
    sources = ["sin(x)^3", "exp(x*t)", "ln(x)/x", "sqrt(1+x^2)",
               "tanh(x)*cosh(x)", "x^x", "1/(1-x)", "tan(x)"]
    for text in sources:
        e = ex.parse(text)
        for _ in range(3):
            e = ex.differentiate(e, "x")  # must not raise


# ---------------------------------------------------------------------------
# simplification

def test_identity_elimination():
    x = ex.Sym("x")
    assert ex.simplify(ex.Sum((x, ex.Const(0.0)))) == x
    assert ex.simplify(ex.Prod((ex.Const(1.0), x))) == x
    assert ex.simplify(ex.Prod((ex.Const(0.0), x))) == ex.Const(0.0)
    assert ex.simplify(ex.Neg(ex.Neg(x))) == x


def test_constant_folding():
    assert ex.simplify(ex.Prod((ex.Const(2.0), ex.Const(3.0)))) == ex.Const(6.0)


# expressions used by the catalog metrics, plus assorted stress cases
ROUND_TRIP_SOURCES = [
    "-(1-2*M/r)", "1/(1-2*M/r)", "r^2*sin(theta)^2", "t^(2*n)",
    "3*n^2/t^2", "-(n*(3*n-2))/t^2", "1/sqrt(1-2*M/r)", "Q/r^2",
    "1 - H^2*r^2", "x - -y", "-x^2 + sin(cos(x))", "2/3",
]


@pytest.mark.parametrize("text", ROUND_TRIP_SOURCES)
def test_print_parse_round_trip(text):
    e = ex.parse(text)
    again = ex.parse(ex.to_str(e))
    assert ex.simplify(again) == ex.simplify(e)


def _bindings_for(e):
    return {name: value for name, value in zip(
        sorted(ex.free_symbols(e)), (0.3, 1.3, 2.1, 0.4, 1.9))}


@pytest.mark.parametrize("text", ROUND_TRIP_SOURCES)
def test_simplify_preserves_value(text):
    e = ex.parse(text)
    b = _bindings_for(e)
    assert ex.evaluate(ex.simplify(e), b) == pytest.approx(
        ex.evaluate(e, b), rel=1e-15, abs=1e-300)


# ---------------------------------------------------------------------------
# evaluation

def test_evaluate_schwarzschild_factor():
    assert ex.evaluate(ex.parse("1-2*M/r"), {"M": 1.0, "r": 4.0}) == 0.5


def test_evaluate_sin_zero():
    assert ex.evaluate(ex.parse("sin(theta)"), {"theta": 0.0}) == 0.0


def test_division_by_zero_is_domain_error():
    with pytest.raises(ex.EvalDomainError):
        ex.evaluate(ex.parse("1/r"), {"r": 0.0})


def test_domain_errors_name_offender():
    with pytest.raises(ex.EvalDomainError, match="ln"):
        ex.evaluate(ex.parse("1 + ln(x)"), {"x": -2.0})
    with pytest.raises(ex.EvalDomainError, match="sqrt"):
        ex.evaluate(ex.parse("sqrt(x)"), {"x": -1.0})


def test_unbound_symbol_error():
    with pytest.raises(ex.UnboundSymbolError, match="M"):
        ex.evaluate(ex.parse("2*M"), {})


# ---------------------------------------------------------------------------
# derivative-vs-finite-difference property

@st.composite
def expressions(draw, depth=0):
    """Random smooth expressions over symbols x and t."""
    if depth >= 3 or draw(st.booleans()):
        leaf = draw(st.sampled_from(["x", "t",
                                     "0.5", "1.5", "2", "3.25"]))
        return leaf
    op = draw(st.sampled_from(["+", "-", "*", "call", "pow"]))
    a = draw(expressions(depth=depth + 1))
    b = draw(expressions(depth=depth + 1))
    if op == "call":
        fn = draw(st.sampled_from(["sin", "cos", "tanh", "exp"]))
        return f"{fn}(({a}) * 0.25)"
    if op == "pow":
        exponent = draw(st.sampled_from(["2", "3", "0.5"]))
        return f"(1.5 + ({a})^2)^{exponent}"
    return f"({a}) {op} ({b})"


@given(expressions(),
       st.floats(min_value=-2.0, max_value=2.0),
       st.floats(min_value=-2.0, max_value=2.0))
@settings(max_examples=200, deadline=None)
def test_derivative_matches_central_difference(text, x, t):
    e = ex.parse(text)
    h = 1e-6
    b = {"x": x, "t": t}
    up = dict(b, x=x + h)
    dn = dict(b, x=x - h)
    try:
        f_up = ex.evaluate(e, up)
        f_dn = ex.evaluate(e, dn)
        fd = (f_up - f_dn) / (2 * h)
        sym = ex.evaluate(ex.differentiate(e, "x"), b)
    except ex.EvalDomainError:
        return
    if abs(fd) > 1e6:  # step noise dominates near steep growth
        return
    # Central differences lose ~eps*|f|/h to cancellation, so widen the
    # absolute tolerance when the function value dwarfs the derivative.
    fd_noise = 4e-16 * max(abs(f_up), abs(f_dn)) / h
    assert sym == pytest.approx(fd, rel=1e-5, abs=max(1e-4, fd_noise))
