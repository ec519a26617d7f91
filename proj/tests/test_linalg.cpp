#include <doctest.h>

#include "epistate/linalg.hpp"
#include "testutil.hpp"

using namespace epistate;
using namespace epistate::linalg;
using testutil::random_unit_vector;
using testutil::random_unitary;

TEST_CASE("tensor of basis states lands on the flattened index") {
    SeededRng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        int da = 2 + static_cast<int>(rng.next_unit() * 3);
        int db = 2 + static_cast<int>(rng.next_unit() * 3);
        int i = static_cast<int>(rng.next_unit() * da);
        int j = static_cast<int>(rng.next_unit() * db);
        StateVector t = tensor(StateVector::basis_state(da, i), StateVector::basis_state(db, j));
        REQUIRE(t.dim() == da * db);
        for (int k = 0; k < t.dim(); ++k) {
            CHECK(std::abs(t[k] - (k == i * db + j ? cx(1.0, 0.0) : cx(0.0, 0.0))) == 0.0);
        }
    }
}

TEST_CASE("tensor concatenates labels and multiplies amplitudes") {
    StateVector plus = StateVector::basis_state(2, 0, {"+", "-"});
    StateVector minus = StateVector::basis_state(2, 1, {"+", "-"});
    StateVector t = tensor(plus, minus);
    CHECK(t.label(0) == "++");
    CHECK(t.label(1) == "+-");
    CHECK(t[1] == cx(1.0, 0.0));
    CHECK(t[0] == cx(0.0, 0.0));
    CHECK(t[2] == cx(0.0, 0.0));
    CHECK(t[3] == cx(0.0, 0.0));
}

TEST_CASE("tensor is associative up to index relabeling") {
    // dyadic amplitudes: exact float products, so association is bit-exact
    StateVector a({cx(0.5, 0.0), cx(0.0, -0.5), cx(0.5, 0.5), cx(0.0, 0.0)});
    StateVector b({cx(0.5, 0.5), cx(-0.5, 0.0)});
    StateVector c({cx(0.25, 0.0), cx(0.0, 0.75), cx(0.5, 0.0)});
    StateVector lhs = tensor(tensor(a, b), c);
    StateVector rhs = tensor(a, tensor(b, c));
    REQUIRE(lhs.dim() == rhs.dim());
    for (int k = 0; k < lhs.dim(); ++k) CHECK(lhs[k] == rhs[k]);

    SeededRng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        StateVector x = random_unit_vector(3, rng);
        StateVector y = random_unit_vector(2, rng);
        StateVector z = random_unit_vector(4, rng);
        StateVector l = tensor(tensor(x, y), z);
        StateVector r = tensor(x, tensor(y, z));
        for (int k = 0; k < l.dim(); ++k) CHECK(std::abs(l[k] - r[k]) < 1e-15);
    }
}

TEST_CASE("apply: identity, projector shrink, dimension mismatch") {
    SeededRng rng(3);
    StateVector v = random_unit_vector(4, rng);
    StateVector iv = apply(Matrix::identity(4), v);
    for (int k = 0; k < 4; ++k) CHECK(iv[k] == v[k]);

    Matrix p(4);
    p.at(1, 1) = 1.0;  // output deliberately not renormalized
    StateVector pv = apply(p, v);
    CHECK(std::abs(pv[1] - v[1]) == 0.0);
    CHECK(pv[0] == cx(0.0, 0.0));
    CHECK(pv.norm() == doctest::Approx(std::abs(v[1])).epsilon(1e-12));

    CHECK_THROWS_AS(apply(Matrix::identity(3), v), ContractViolation);
}

TEST_CASE("inner: conjugate-linear in the first argument, norm on diagonal") {
    SeededRng rng(4);
    StateVector a = random_unit_vector(5, rng);
    StateVector b = random_unit_vector(5, rng);
    CHECK(std::abs(inner(a, a) - cx(1.0, 0.0)) < 1e-12);

    cx w(0.3, -0.8);
    std::vector<cx> scaled(a.amplitudes());
    for (cx& z : scaled) z *= w;
    StateVector wa(scaled);
    CHECK(std::abs(inner(wa, b) - std::conj(w) * inner(a, b)) < 1e-12);
    CHECK(std::abs(inner(b, wa) - w * inner(b, a)) < 1e-12);

    CHECK_THROWS_AS(inner(a, random_unit_vector(4, rng)), ContractViolation);
}

TEST_CASE("unitaries preserve norms and scalar products") {
    SeededRng rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        int dim = 2 + static_cast<int>(rng.next_unit() * 7);
        Matrix u = random_unitary(dim, rng);
        REQUIRE(u.is_unitary(1e-10));
        StateVector a = random_unit_vector(dim, rng);
        StateVector b = random_unit_vector(dim, rng);
        CHECK(std::abs(apply(u, a).norm() - 1.0) < 1e-10);
        CHECK(std::abs(inner(apply(u, a), apply(u, b)) - inner(a, b)) < 1e-10);
    }
}

TEST_CASE("validating constructors reject wrong structure") {
    CHECK_THROWS_AS(Matrix::hermitian(2, {cx(0, 0), cx(1, 0), cx(0, 0), cx(0, 0)}),
                    ContractViolation);
    CHECK_THROWS_AS(Matrix::unitary(2, {cx(1, 0), cx(1, 0), cx(0, 0), cx(1, 0)}),
                    ContractViolation);
    CHECK_NOTHROW(Matrix::hermitian(2, {cx(1, 0), cx(0, 1), cx(0, -1), cx(2, 0)}));
    CHECK_THROWS_AS(StateVector({cx(std::nan(""), 0.0)}), InvalidState);
}

TEST_CASE("born_sample on an eigenstate is deterministic and consumes one draw") {
    StateVector v = StateVector::basis_state(2, 0);
    Matrix p0(2), p1(2);
    p0.at(0, 0) = 1.0;
    p1.at(1, 1) = 1.0;
    MeasurementContext ctx({p0, p1});

    SeededRng rng(42);
    SeededRng shadow(42);
    for (int i = 0; i < 50; ++i) {
        auto out = born_sample(v, ctx, rng);
        CHECK(out.index == 0);
        CHECK(std::abs(out.post[0] - cx(1.0, 0.0)) < 1e-12);
        shadow.next_unit();  // exactly one draw per call
        CHECK(rng.next_u64() == shadow.next_u64());
    }
}

TEST_CASE("born_sample frequencies match the Born weights at five sigma") {
    StateVector v = StateVector({cx(1.0, 0.0), cx(1.0, 0.0)}).normalized();
    Matrix p0(2), p1(2);
    p0.at(0, 0) = 1.0;
    p1.at(1, 1) = 1.0;
    MeasurementContext ctx({p0, p1});

    const int64_t shots = 100000;
    int64_t zeros = 0;
    for (int64_t i = 0; i < shots; ++i) {
        SeededRng rng = derive_rng(100, static_cast<uint64_t>(i));
        if (born_sample(v, ctx, rng).index == 0) ++zeros;
    }
    CHECK(testutil::within_5sigma(zeros, shots, 0.5));
}

TEST_CASE("born_sample rejects projector sets that do not resolve identity") {
    StateVector v = StateVector::basis_state(2, 0);
    Matrix p0(2);
    p0.at(0, 0) = 1.0;
    SeededRng rng(1);
    CHECK_THROWS_AS(born_sample(v, std::vector<Matrix>{p0}, rng), ContractViolation);
    Matrix overlapping(2);
    overlapping.at(0, 0) = 1.0;
    overlapping.at(1, 1) = 1.0;  // overlaps p0, pair not orthogonal
    CHECK_THROWS_AS(born_sample(v, std::vector<Matrix>{p0, overlapping}, rng), ContractViolation);
}

TEST_CASE("hermitian_eigensystem reconstructs the matrix") {
    SeededRng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        int dim = 2 + static_cast<int>(rng.next_unit() * 9);
        Matrix h = testutil::random_hermitian(dim, rng);
        EigenSystem es = hermitian_eigensystem(h);
        REQUIRE(static_cast<int>(es.values.size()) == dim);
        for (size_t k = 1; k < es.values.size(); ++k) CHECK(es.values[k] >= es.values[k - 1]);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                cx want = (i == j) ? cx(1.0, 0.0) : cx(0.0, 0.0);
                CHECK(std::abs(inner(es.vectors[static_cast<size_t>(i)],
                                     es.vectors[static_cast<size_t>(j)]) -
                               want) < 1e-11);
            }
        for (int k = 0; k < dim; ++k) {
            StateVector hv = apply(h, es.vectors[static_cast<size_t>(k)]);
            for (int r = 0; r < dim; ++r)
                CHECK(std::abs(hv[r] - es.values[static_cast<size_t>(k)] *
                                           es.vectors[static_cast<size_t>(k)][r]) < 1e-10);
        }
    }
    CHECK_THROWS_AS(hermitian_eigensystem(Matrix(2, {cx(0, 0), cx(1, 0), cx(0, 0), cx(0, 0)})),
                    ContractViolation);
}
