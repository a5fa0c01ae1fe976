"""Smoke test for the baryeval Python extension.

Build and install first:

    pip install maturin
    maturin develop --release -m crates/python/Cargo.toml

then run `python python/smoke_test.py`.
"""

import math

import baryeval


def close(a, b, tol=1e-10):
    return abs(a - b) <= tol * max(1.0, abs(b))


def check_element():
    def field(xi):
        return xi[0] ** 2 + xi[1] ** 2 - xi[2] ** 2

    el = baryeval.Element.from_function("tet", 4, field)
    assert el.shape == "tet" and el.order == 4 and el.dim == 3
    assert len(el.nodes()) == len(el.values()) == 6 ** 3
    assert el.weight_storage() == 18

    xi = [-0.5, -0.5, -0.5]
    value, grad, d2 = el.evaluate(xi, deriv="first")
    assert close(value, 0.25), value
    assert all(close(g, e) for g, e in zip(grad, [-1.0, -1.0, 1.0])), grad
    assert d2 is None

    values, grads = el.evaluate_matrix([xi, [-0.6, -0.3, -0.4]], gradient=True)
    assert close(values[0], value)
    assert all(close(a, b) for a, b in zip(grads[0], grad))

    try:
        el.evaluate([0.9, 0.9, 0.9])
    except ValueError as e:
        assert "outside" in str(e)
    else:
        raise AssertionError("point outside the tetrahedron was accepted")


def check_nodeset():
    ns = baryeval.NodeSet("gll", 8)
    assert len(ns) == 8 and ns.nodes()[0] == -1.0 and ns.nodes()[-1] == 1.0
    values = [math.sin(z) for z in ns.nodes()]
    value, grad, d2 = ns.evaluate(values, 0.3, deriv="second")
    assert abs(value - math.sin(0.3)) < 1e-5
    assert abs(grad[0] - math.cos(0.3)) < 1e-4
    assert abs(d2 + math.sin(0.3)) < 1e-2
    stored, _, _ = ns.evaluate(values, ns.nodes()[3])
    assert stored == values[3]


def check_locate():
    def mapping(xi):
        return [xi[0] + 0.05 * xi[1] ** 2, xi[1] + 0.05 * xi[0] ** 2]

    star = [-0.4, -0.3]
    xi, residual, iterations, converged = baryeval.locate("tri", 5, mapping, mapping(star))
    assert converged and iterations <= 50, (xi, residual, iterations)
    assert all(abs(a - b) < 1e-8 for a, b in zip(xi, star)), xi


def check_verify_and_bench():
    cells = baryeval.verify("quad,prism", "2..3")
    assert len(cells) == 4 and all(passed for _, _, passed, _ in cells), cells
    rows = baryeval.run_bench("segment", "3", reps=2, seed=1)
    assert len(rows) == 9
    assert {r[2] for r in rows} == {"bary", "matrix_cached", "matrix_recomputed"}


def main():
    assert "hex" in baryeval.SHAPES
    check_element()
    check_nodeset()
    check_locate()
    check_verify_and_bench()
    print("python smoke test passed")


if __name__ == "__main__":
    main()
