"""Canonical printer tests: golden renderings plus the two round-trip
laws (parse-print-parse preserves the tree, print-parse-print is a
fixed point) over generated plans."""

import random

import pytest

from plansweep.ast_nodes import Add, Mul, Num, Sub
from plansweep.parser import parse_plan
from plansweep.printer import print_expr, print_plan

from gens import rand_plan_text

GOLDEN = [
    # (input, canonical form)
    ("", ""),
    ("parameter a integer default 5;", "parameter a integer default 5;\n"),
    (
        "parameter   a\n  integer\n  default   5 ;",
        "parameter a integer default 5;\n",
    ),
    (
        "parameter a integer default - 5;",
        "parameter a integer default -5;\n",
    ),
    (
        "parameter a float default 2.50;",
        "parameter a float default 2.5;\n",
    ),
    (
        "parameter a float default 1e3;",
        "parameter a float default 1000.0;\n",
    ),
    (
        # Integral spelling is preserved as an integer literal.
        "parameter a float default 2;",
        "parameter a float default 2;\n",
    ),
    (
        'parameter a label "A b" text default hello;',
        'parameter a label "A b" text default "hello";\n',
    ),
    (
        'parameter a text default "say \\"hi\\"";',
        'parameter a text default "say \\"hi\\"";\n',
    ),
    (
        "parameter a integer range from 1 to 10 step 2;",
        "parameter a integer range from 1 to 10 step 2;\n",
    ),
    (
        "parameter a float range from 0 to 1 points 3;",
        "parameter a float range from 0 to 1 points 3;\n",
    ),
    (
        "parameter a integer select anyof 1 2 3 default 2 3;",
        "parameter a integer select anyof 1 2 3 default 2 3;\n",
    ),
    (
        "parameter a text select oneof alpha beta default beta;",
        'parameter a text select oneof "alpha" "beta" default "beta";\n',
    ),
    (
        "parameter a float random from -2.5 to 7.5 points 4;",
        "parameter a float random from -2.5 to 7.5 points 4;\n",
    ),
    (
        "parameter a float compute ((2)+(3*4));",
        "parameter a float compute 2+3*4;\n",
    ),
    (
        "parameter a float compute (2+3)*4;",
        "parameter a float compute (2+3)*4;\n",
    ),
    (
        'parameter a text jitp "n*2";',
        'parameter a text jitp "n*2";\n',
    ),
    (
        "task main\n\n  execute  echo hi \n# note\nendtask",
        "task main\n    execute echo hi\nendtask\n",
    ),
    (
        "task main\n  copy root:in.pdb out.pdb\nendtask",
        "task main\n    copy root:in.pdb out.pdb\nendtask\n",
    ),
    (
        'task main\n  copy "a b.txt" c.txt\nendtask',
        'task main\n    copy "a b.txt" c.txt\nendtask\n',
    ),
    (
        "task main\n  node:execute tar xf big.tar\nendtask",
        "task main\n    node:execute tar xf big.tar\nendtask\n",
    ),
]


@pytest.mark.parametrize("source,expected", GOLDEN)
def test_golden(source, expected):
    result = parse_plan(source)
    assert result.ok, [str(d) for d in result.diagnostics]
    assert print_plan(result.plan) == expected


EXPR_GOLDEN = [
    (Num(5.0), "5"),
    (Num(2.5), "2.5"),
    (Num(-3.0), "-3"),
    (Add(Num(1.0), Num(2.0)), "1+2"),
    (Mul(Add(Num(1.0), Num(2.0)), Num(3.0)), "(1+2)*3"),
    (Add(Num(1.0), Mul(Num(2.0), Num(3.0))), "1+2*3"),
    # Right operand at equal precedence keeps parens so the printed
    # form re-parses to the same (left-leaning vs right-leaning) tree.
    (Sub(Num(1.0), Sub(Num(2.0), Num(3.0))), "1-(2-3)"),
    (Sub(Sub(Num(1.0), Num(2.0)), Num(3.0)), "1-2-3"),
    (Mul(Num(2.0), Mul(Num(3.0), Num(4.0))), "2*(3*4)"),
    (Add(Num(-1.0), Num(-2.0)), "-1+-2"),
]


@pytest.mark.parametrize("expr,text", EXPR_GOLDEN)
def test_expr_golden(expr, text):
    assert print_expr(expr) == text


def _canonical_pair(source):
    result = parse_plan(source)
    assert result.ok, [str(d) for d in result.diagnostics]
    return result.plan, print_plan(result.plan)


@pytest.mark.parametrize("seed", range(60))
def test_roundtrip_laws_on_generated_plans(seed):
    rng = random.Random(seed)
    source = rand_plan_text(rng)
    plan, canon = _canonical_pair(source)
    plan2, canon2 = _canonical_pair(canon)
    assert plan2 == plan
    assert canon2 == canon


def test_roundtrip_on_handwritten_sweep():
    source = (
        'parameter lig label "Ligand" file select anyof "l1.pdb" "l2.pdb";\n'
        "parameter temp float range from 280 to 320 step 10;\n"
        "parameter seed integer random from 1 to 1000 points 3;\n"
        "task main\n"
        "    copy root:$lig input.pdb\n"
        "    substitute dock.skel dock.conf\n"
        "    execute dock --conf dock.conf\n"
        "endtask\n"
    )
    plan, canon = _canonical_pair(source)
    assert canon == source
    plan2, canon2 = _canonical_pair(canon)
    assert (plan2, canon2) == (plan, canon)
