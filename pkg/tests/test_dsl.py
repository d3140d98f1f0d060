import pytest

from thetasums.dsl import (
    ParseError,
    parse_chain,
    parse_polygonal_sum,
    parse_theta_expression,
    serialize,
)
from thetasums.polygonal import QuadTerm
from thetasums.theta import ProductTerm, ThetaAtom, ThetaExpression


def test_parse_simple_atoms():
    expr = parse_theta_expression("phi(q)")
    assert expr.terms == (ProductTerm(1, 0, (ThetaAtom(1, 1),)),)
    expr = parse_theta_expression("f(q, q^2)")
    assert expr.terms[0].atoms == (ThetaAtom(1, 2),)
    assert parse_theta_expression("Y(q^4)").terms[0].atoms == (ThetaAtom(4, 20),)


def test_parse_q1_rhs_prefix():
    expr = parse_theta_expression("X(q^8)*X(q^16)*Y(q^4)^2 + q*X(q^16)*Y(q^4)^3")
    assert len(expr.terms) == 2
    first, second = expr.terms
    assert first.multiplier == 1 and first.shift == 0
    assert first.atoms == (
        ThetaAtom(8, 16),
        ThetaAtom(16, 32),
        ThetaAtom(4, 20),
        ThetaAtom(4, 20),
    )
    assert second.shift == 1
    assert second.atoms == (ThetaAtom(16, 32),) + (ThetaAtom(4, 20),) * 3


def test_parse_multiplier_and_shift():
    expr = parse_theta_expression("2*q^2*psi(q^9)*Y(q^3)")
    term = expr.terms[0]
    assert term.multiplier == 2
    assert term.shift == 2
    assert term.atoms == (ThetaAtom(9, 27), ThetaAtom(3, 15))


def test_parse_whitespace_insensitive():
    a = parse_theta_expression("phi(q^4)+2*q*psi(q^8)")
    b = parse_theta_expression("  phi( q^4 )  +  2 * q * psi( q^8 ) ")
    assert a == b


def test_parse_errors_carry_spans():
    with pytest.raises(ParseError) as info:
        parse_theta_expression("phi(q^4) + 2*plop(q)")
    assert info.value.span.line == 1
    assert info.value.span.col_start == 14

    with pytest.raises(ParseError):
        parse_theta_expression("f(q^0, q^0)")
    with pytest.raises(ParseError) as info:
        parse_theta_expression("phi(q) + ")
    assert "expected" in str(info.value)


def test_parse_polygonal_sums():
    s = parse_polygonal_sum("p8 + p8 + p8 + 2*p8")
    assert len(s.terms) == 4
    assert s.terms[0] == QuadTerm(1, 6, -4)
    assert s.terms[3] == QuadTerm(2, 6, -4)

    s = parse_polygonal_sum("x(5x+1)/2 + x(5x+1)/2")
    assert s.terms[0] == QuadTerm(1, 5, -1)

    s = parse_polygonal_sum("p3")
    assert s.terms == (QuadTerm(1, 1, -1),)


def test_parse_polygonal_rejects_bad_terms():
    with pytest.raises(ParseError):
        parse_polygonal_sum("p2")
    with pytest.raises(ParseError):
        parse_polygonal_sum("x(3x+2)/2")  # parity violation
    with pytest.raises(ParseError):
        parse_polygonal_sum("x(3x+1)/3")
    with pytest.raises(ParseError):
        parse_polygonal_sum("p3 + + p4")


def test_parse_chain():
    chain = parse_chain("p3 ~ p6 ~ x(4x-2)/2")
    assert len(chain) == 3


def test_serialize_is_canonical_text():
    assert serialize(parse_theta_expression("phi(q)")) == "phi(q)"
    assert serialize(parse_theta_expression("phi( q^4 ) + 2 * q * psi(q^8)")) == (
        "phi(q^4) + 2*q*psi(q^8)"
    )


def test_roundtrip_theta():
    texts = [
        "phi(q)",
        "Y(q)*Y(q^2)*Y(q^4)^2",
        "X(q^8)*X(q^16)*Y(q^4)^2 + q*X(q^16)*Y(q^4)^3",
        "2*q^2*psi(q^9)*Y(q^3)",
        "f(q^6, q^10) + q*f(q^2, q^14)",
        "0",
    ]
    for text in texts:
        expr = parse_theta_expression(text)
        assert parse_theta_expression(serialize(expr)) == expr
        # One normalization pass is idempotent.
        assert serialize(parse_theta_expression(serialize(expr))) == serialize(expr)


def test_roundtrip_polygonal():
    texts = ["p3", "p8 + p8 + p8 + 2*p8", "x(5x-1)/2 + 3*x(7x-3)/2", "p6 + 2*p6"]
    for text in texts:
        s = parse_polygonal_sum(text)
        assert parse_polygonal_sum(serialize(s)) == s
        assert serialize(parse_polygonal_sum(serialize(s))) == serialize(s)


def test_serialize_doubled_canonical_term():
    from thetasums.theta import canonicalize

    term = canonicalize(ProductTerm(1, 0, (ThetaAtom(0, 8),)))
    assert serialize(term) == "2*psi(q^8)"


def test_roundtrip_all_catalog_entries(catalog):
    for entry in catalog.entries:
        for expr in (entry.lhs, entry.rhs):
            if expr is not None:
                assert parse_theta_expression(serialize(expr)) == expr
        if entry.decomposition is not None:
            lhs = ThetaExpression((entry.decomposition.lhs,))
            rhs = ThetaExpression(entry.decomposition.rhs)
            assert parse_theta_expression(serialize(lhs)) == lhs
            assert parse_theta_expression(serialize(rhs)) == rhs
        for s in entry.chain:
            assert parse_polygonal_sum(serialize(s)) == s
        if entry.target is not None:
            assert parse_polygonal_sum(serialize(entry.target)) == entry.target
        if entry.base is not None:
            assert parse_polygonal_sum(serialize(entry.base)) == entry.base
        for claim in entry.claims:
            assert parse_polygonal_sum(serialize(claim)) == claim
