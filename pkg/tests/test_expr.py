import pytest
from hypothesis import given, strategies as st

from cxgmdl import expr as ex
from cxgmdl.semantics import BOTTOM, Env, EvalError, eval_meaning_expr


def ev(text, **kw):
    return eval_meaning_expr(ex.parse_expr(text), Env(**kw))


@pytest.mark.parametrize("text,value", [
    ("1+2*3", 7),
    ("(1+2)*3", 9),
    ("2**3**2", 512),          # right associative
    ("-2**2", -4),             # unary minus binds looser than **
    ("7/2", 3),                # floor division
    ("-7/2", -4),
    ("7%3", 1),
    ("10-4-3", 3),             # left associative
    ("1*10**4+7*10**3+3*10**2+4*10+1", 17341),
])
def test_arithmetic(text, value):
    assert ev(text) == value


@pytest.mark.parametrize("text,value", [
    ("1<2 and 2<3", True),
    ("1<2 and not 2<3", False),
    ("1>2 or 3>=3", True),
    ("2 in {1,2,3}", True),
    ("4 not in {1,2,3}", True),
    ("if 1==1 then 5 else 6", 5),
    ("let X=4 in X*X", 16),
])
def test_logic(text, value):
    assert ev(text) == value


def test_bottom_is_absorbing():
    assert ev("1+bottom") is BOTTOM
    assert ev("if bottom then 1 else 2") is BOTTOM
    assert ev("f(bottom, x)") is BOTTOM
    # the untaken branch is never evaluated
    assert ev("if 1<2 then 3 else bottom") == 3


def test_short_circuit():
    # rhs would be an error if evaluated
    assert ev("1>2 and 1/0==1") is False
    assert ev("1<2 or 1/0==1") is True


def test_globals():
    assert ev("3*10**pos(d)", pos={"d": 2}) == 300
    assert ev("E+1", accum=41) == 42
    assert ev("left==none") is True
    assert ev("Base*2", context=(16,)) == 32
    assert ev("case left of {at:a, from:b}", left="from") == "b"
    assert ev("case left of {at:a}", left="to") is BOTTOM


@pytest.mark.parametrize("text", ["1/0", "1%0", "2**-1", "E", "mu(x)", "pos(x)", "1+x", "not 3"])
def test_eval_errors(text):
    with pytest.raises(EvalError):
        ev(text)


@pytest.mark.parametrize("text,col", [("1+", 2), ("if 1 then 2", 11), ("(1", 2), ("1 2", 2),
                                      ("let 3=1 in 2", 4)])
def test_syntax_error_column(text, col):
    with pytest.raises(ex.ExprSyntaxError) as err:
        ex.parse_expr(text)
    assert err.value.column == col  # 0-based offset of the offending token


def test_glyph_rendering_counts():
    head, body = ex.parse_meaning("mu(1) = 1*10**pos(1)")
    assert ex.render_meaning(head, body, glyphs=True) == "μ(1)=1*10**pos(1)"
    head, body = ex.parse_meaning("mu(CL) = if mu(pp) in mu(CL1) then bottom else mu(CL1)++mu(pp)")
    assert ex.render_meaning(head, body, glyphs=True) == \
        "μ(CL)=ifμ(pp)inμ(CL1)then⊥elseμ(CL1)++μ(pp)"


def test_global_feature_detection():
    assert ex.uses_global_features(ex.parse_expr("1*10**pos(d)"))
    assert ex.uses_global_features(ex.parse_expr("if left!=none then bottom else 0"))
    assert not ex.uses_global_features(ex.parse_expr("10*mu(DS1)+mu(D)"))


def test_mu_refs():
    assert ex.mu_refs(ex.parse_expr("10*mu(DS1)+mu(D)")) == ("DS1", "D")


# ---------------------------------------------------------------- properties

leaf = st.one_of(st.integers(0, 50).map(ex.Num),
                 st.sampled_from(["a", "b", "X"]).map(ex.Sym),
                 st.sampled_from(["DS1", "D", "3"]).map(ex.Mu),
                 st.just(ex.BottomLit()), st.just(ex.Accum()), st.just(ex.Left()))


def _node(children):
    ops = ["+", "-", "*", "/", "%", "**", "++", "==", "!=", "<", ">=", "in", "not in", "and", "or"]
    return st.one_of(
        st.builds(ex.BinOp, st.sampled_from(ops), children, children),
        st.builds(ex.Neg, children),
        st.builds(ex.Not, children),
        st.builds(ex.If, children, children, children),
        st.builds(ex.Let, st.sampled_from(["X", "T"]), children, children),
        st.builds(ex.Call, st.sampled_from(["f", "pp", "noun"]),
                  st.lists(children, max_size=3).map(tuple)),
        st.builds(ex.ListLit, st.lists(children, max_size=3).map(tuple)),
        st.builds(ex.SetLit, st.lists(children, max_size=3).map(tuple)),
    )


exprs = st.recursive(leaf, _node, max_leaves=12)


@given(exprs)
def test_render_parse_round_trip(e):
    text = ex.render_expr(e)
    assert ex.parse_expr(text) == e
    # rendering is a fixed point after one round
    assert ex.render_expr(ex.parse_expr(text)) == text


arith_leaf = st.integers(0, 30).map(ex.Num)


def _arith(children):
    return st.one_of(st.builds(ex.BinOp, st.sampled_from(["+", "-", "*"]), children, children),
                     st.builds(ex.Neg, children))


@given(st.recursive(arith_leaf, _arith, max_leaves=10))
def test_arith_matches_python(e):
    # independent oracle: Python evaluates the rendered text
    text = ex.render_expr(e)
    assert ev(text) == eval(text)
