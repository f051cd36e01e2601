use criterion::{black_box, criterion_group, criterion_main, Criterion};

use symcas::calculus::{der2, diff, limit, taylor};
use symcas::matrix::{self, MatrixExpr};
use symcas::polys::{expand, factor};
use symcas::solver::solve_sys;
use symcas::{evalf, parse, to_infix, Direction, Expr, Symbol};

fn sym(n: &str) -> Symbol {
    Symbol::plain(n).unwrap()
}

fn p(s: &str) -> Expr {
    parse(s).unwrap()
}

fn symbolic_matrix(n: usize) -> MatrixExpr {
    let rows = (0..n).map(|i| (0..n).map(|j| p(&format!("m{i}{j}"))).collect()).collect();
    MatrixExpr::from_rows(rows).unwrap()
}

fn expressions(c: &mut Criterion) {
    let text = "a*x + b*x^2 + c*sin(x^2) - exp(x*y)/(1 + z^2) + sqrt(x + y)";
    c.bench_function("parse", |b| b.iter(|| parse(black_box(text)).unwrap()));
    let e = p(text);
    c.bench_function("print", |b| b.iter(|| to_infix(black_box(&e))));
    let x = sym("x");
    c.bench_function("diff", |b| b.iter(|| diff(black_box(&e), &x).unwrap()));
    let vars = [sym("x"), sym("y"), sym("z")];
    c.bench_function("der2 3x3", |b| b.iter(|| der2(black_box(&e), &vars).unwrap()));
}

fn polynomials(c: &mut Criterion) {
    let power = p("(x + y + z + 1)^8");
    c.bench_function("expand (x+y+z+1)^8", |b| b.iter(|| expand(black_box(&power)).unwrap()));
    let q = expand(&p("(x - 1)^7*(x^2 + x + 1)^2*(3*x + 2)")).unwrap();
    c.bench_function("factor degree 12", |b| b.iter(|| factor(black_box(&q)).unwrap()));
}

fn calculus(c: &mut Criterion) {
    let (n, x) = (sym("n"), sym("x"));
    let f = p("(1 + 1/n)^n");
    c.bench_function("limit euler", |b| {
        b.iter(|| limit(black_box(&f), &n, &Expr::infinity(), Direction::Both).unwrap())
    });
    let g = p("cos(x)*exp(x)");
    c.bench_function("taylor order 8", |b| b.iter(|| taylor(black_box(&g), &x, &Expr::zero(), 8).unwrap()));
    let h = p("exp(49/144)");
    c.bench_function("evalf 100 digits", |b| b.iter(|| evalf(black_box(&h), 100).unwrap()));
}

fn matrices(c: &mut Criterion) {
    let m3 = symbolic_matrix(3);
    let m4 = symbolic_matrix(4);
    c.bench_function("det symbolic 4x4", |b| b.iter(|| matrix::det(black_box(&m4)).unwrap()));
    c.bench_function("inv symbolic 3x3", |b| b.iter(|| matrix::inv(black_box(&m3)).unwrap()));
    let a = MatrixExpr::from_rows(vec![vec![p("a"), p("c")], vec![p("b"), p("d")]]).unwrap();
    c.bench_function("eigen symbolic 2x2", |b| b.iter(|| matrix::eigen(black_box(&a)).unwrap()));
    let k = MatrixExpr::from_rows(vec![
        vec![p("3*a^2/v2 + 1"), p("-a/v2"), p("-a/v2"), p("-a/v2")],
        vec![p("-a/v2"), p("1/v2"), p("0"), p("0")],
        vec![p("-a/v2"), p("0"), p("1/v2"), p("0")],
        vec![p("-a/v2"), p("0"), p("0"), p("1/v2")],
    ])
    .unwrap();
    c.bench_function("schur complement 4x4", |b| b.iter(|| matrix::schur_complement(black_box(&k), 1).unwrap()));
}

fn solving(c: &mut Criterion) {
    let eqs: Vec<Expr> = ["a - y1/p1", "a - y2/p2", "a - y3/p3", "p1 + p2 + p3 - 1"].iter().map(|s| p(s)).collect();
    let unknowns = [sym("p1"), sym("p2"), sym("p3"), sym("a")];
    c.bench_function("solve lagrange", |b| b.iter(|| solve_sys(black_box(&eqs), &unknowns).unwrap()));
}

criterion_group!(benches, expressions, polynomials, calculus, matrices, solving);
criterion_main!(benches);
