#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "dawin/error.hpp"
#include "dawin/expertise.hpp"
#include "support.hpp"

using namespace dawin;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double d : v) x[i++] = d;
    return x;
}

ProbVector random_prob(Rng& rng, Eigen::Index c, double sharp = 3.0) {
    Eigen::VectorXd z(c);
    for (auto& v : z) v = std::exp(sharp * rng.normal());
    return ProbVector(z / z.sum());
}

ExpertiseRecord record(double h0, double h1) {
    ExpertiseRecord r;
    r.entropies = vec({h0, h1});
    return r;
}

double two_pass_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("entropy closed forms") {
    CHECK(entropy(vec({0, 1, 0, 0})) == 0.0);
    CHECK(entropy(vec({0.25, 0.25, 0.25, 0.25})) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(entropy(vec({0.5, 0.5, 0, 0})) == doctest::Approx(0.693147).epsilon(1e-6));
    // Scalar-templated: float instantiation.
    Eigen::Vector4f f(0.25f, 0.25f, 0.25f, 0.25f);
    CHECK(entropy(f) == doctest::Approx(std::log(4.0f)).epsilon(1e-6));
}

TEST_CASE("entropy stays in [0, ln C]") {
    Rng rng(1);
    for (int t = 0; t < 1000; ++t) {
        const ProbVector p = random_prob(rng, 10);
        const double h = entropy(p);
        CHECK(h >= 0.0);
        CHECK(h <= std::log(10.0) + 1e-12);
    }
}

TEST_CASE("xentropy") {
    CHECK(xentropy(vec({0, 1}), 1) == 0.0);
    CHECK(xentropy(vec({1 - std::exp(-2.0), std::exp(-2.0)}), 1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(xentropy(vec({1, 0}), 1) == doctest::Approx(-std::log(kProbEpsilon)));
    CHECK_THROWS_AS(xentropy(vec({1, 0}), 2), Error);
}

TEST_CASE("soft X-entropy by hand on three classes") {
    const Eigen::VectorXd p = vec({0.5, 0.3, 0.2});
    const Eigen::VectorXd q = vec({0.6, 0.4, 0.0});
    const double hand = -(0.6 * std::log(0.5) + 0.4 * std::log(0.3));
    CHECK(soft_xentropy(p, q) == doctest::Approx(hand).epsilon(1e-15));
    CHECK(hand == doctest::Approx(0.897477).epsilon(1e-6));
}

TEST_CASE("coeff_pair examples") {
    CHECK(coeff_pair(0.7, 0.7) == 0.5);
    CHECK(coeff_pair(std::log(2.0), 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(coeff_pair(std::nan(""), 1.0), Error);
    CHECK_THROWS_AS(coeff_pair(1.0, std::numeric_limits<double>::infinity()), Error);
}

TEST_CASE("coefficient algebra on random inputs") {
    Rng rng(2);
    for (int t = 0; t < 20000; ++t) {
        const double h0 = rng.uniform(0.0, 5.0);
        const double h1 = rng.uniform(0.0, 5.0);
        const double l = coeff_pair(h0, h1);
        CHECK(std::abs(l + coeff_pair(h1, h0) - 1.0) <= 1e-12);
        CHECK(std::abs(l - 1.0 / (1.0 + std::exp(-(h0 - h1)))) <= 1e-12);
        CHECK(std::abs(l - coeff_multi(vec({h0, h1}))[1]) <= 1e-12);
    }
}

TEST_CASE("coeff_multi") {
    const Eigen::VectorXd u = coeff_multi(vec({1, 1, 1}));
    for (Eigen::Index j = 0; j < 3; ++j) CHECK(u[j] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    const Eigen::VectorXd w = coeff_multi(vec({0, std::log(2.0)}));
    CHECK(w[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(coeff_multi(vec({1})), Error);

    Rng rng(3);
    for (int t = 0; t < 1000; ++t) {
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.index(7));
        const Eigen::VectorXd h = testing::random_vector(rng, m, 0.0, 3.0);
        const Eigen::VectorXd l = coeff_multi(h);
        CHECK(std::abs(l.sum() - 1.0) <= 1e-12);
        CHECK((l.array() >= 0.0).all());
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j)
                if (h[i] < h[j]) CHECK(l[i] > l[j]);
        // Shift invariance and permutation equivariance.
        const double c = rng.uniform(-20.0, 20.0);
        CHECK((coeff_multi((h.array() + c).matrix()) - l).cwiseAbs().maxCoeff() <= 1e-12);
        std::vector<Eigen::Index> perm(static_cast<std::size_t>(m));
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        Eigen::VectorXd hp(m);
        for (Eigen::Index j = 0; j < m; ++j) hp[j] = h[perm[static_cast<std::size_t>(j)]];
        const Eigen::VectorXd lp = coeff_multi(hp);
        for (Eigen::Index j = 0; j < m; ++j) CHECK(std::abs(lp[j] - l[perm[static_cast<std::size_t>(j)]]) <= 1e-12);
    }
}

TEST_CASE("domain offset examples") {
    SUBCASE("constant entropies give O=0 and plain coefficients") {
        std::vector<ExpertiseRecord> r{record(0.4, 1.1), record(0.4, 1.1), record(0.4, 1.1)};
        const std::vector<double> h0{0.4, 0.4, 0.4}, h1{1.1, 1.1, 1.1};
        const DomainOffset o = domain_offset(h0, h1);
        CHECK(std::abs(o.offset) <= 1e-15);
        const CoefficientBatch b = coeff_pair_offset_batch(r);
        CHECK(b.mode == CoefficientMode::OffsetAdjusted);
        for (Eigen::Index i = 0; i < 3; ++i) CHECK(b.lambda(i) == doctest::Approx(coeff_pair(0.4, 1.1)).epsilon(1e-15));
    }
    SUBCASE("equal means give T=2 and O=s/h") {
        const std::vector<double> h0{1.0, 3.0}, h1{2.5, 1.5};
        const DomainOffset o = domain_offset(h0, h1);
        CHECK(o.relative_expertise == doctest::Approx(2.0));
        // population std: 1 and 0.5, means 2.
        CHECK(o.offset == doctest::Approx(0.5 * (1.0 / 2.0 + 0.5 / 2.0)));
    }
    SUBCASE("O=0 reduces to the plain formula") {
        Rng rng(4);
        for (int t = 0; t < 100; ++t) {
            const double a = rng.uniform(0, 2), b = rng.uniform(0, 2);
            CHECK(std::abs(coeff_pair_offset(a, b, DomainOffset{0.0, rng.uniform(1, 5)}) - coeff_pair(a, b)) <= 1e-12);
        }
    }
    SUBCASE("errors") {
        const std::vector<double> one{1.0};
        CHECK_THROWS_AS(domain_offset(one, one), Error);
        const std::vector<double> zero{0.0, 0.0}, pos{1.0, 2.0};
        try {
            domain_offset(zero, pos);
            FAIL("expected degenerate-domain");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DegenerateDomain);
        }
        try {
            domain_offset(one, one);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InsufficientData);
        }
    }
}

TEST_CASE("offset-adjusted coefficients match a two-pass oracle") {
    Rng rng(5);
    std::vector<ExpertiseRecord> records;
    std::vector<double> h0, h1;
    for (int i = 0; i < 700; ++i) {
        h0.push_back(rng.uniform(0.01, 2.3));
        h1.push_back(rng.uniform(0.0, 2.3) * rng.uniform());
        records.push_back(record(h0.back(), h1.back()));
    }
    const double n = static_cast<double>(h0.size());
    const double m0 = std::accumulate(h0.begin(), h0.end(), 0.0) / n;
    const double m1 = std::accumulate(h1.begin(), h1.end(), 0.0) / n;
    double v0 = 0, v1 = 0;
    for (std::size_t i = 0; i < h0.size(); ++i) {
        v0 += (h0[i] - m0) * (h0[i] - m0);
        v1 += (h1[i] - m1) * (h1[i] - m1);
    }
    const double o = 0.5 * (std::sqrt(v0 / n) / m0 + std::sqrt(v1 / n) / m1);
    const double t = (m0 + m1) / m0;
    const CoefficientBatch b = coeff_pair_offset_batch(records);
    for (std::size_t i = 0; i < h0.size(); ++i) {
        const double want = (std::exp(-h1[i]) + o / t) / (std::exp(-h0[i]) + std::exp(-h1[i]) + o);
        const double got = b.lambda(static_cast<Eigen::Index>(i));
        CHECK(std::abs(got - want) <= 1e-12);
        CHECK(got > 0.0);
        CHECK(got < 1.0);
    }
    b.validate();
}

TEST_CASE("oracle coefficient") {
    CHECK(oracle_coeff(0.2, 0.8) == doctest::Approx(0.8));
    CHECK(oracle_coeff(0.37, 0.37) == 0.5);
    CHECK(oracle_coeff(0.1, 0.9) == doctest::Approx(0.9));
    CHECK_THROWS_AS(oracle_coeff(0.0, 0.0), Error);
    Rng rng(6);
    for (int t = 0; t < 1000; ++t) {
        const double p0 = rng.uniform(1e-6, 1.0), p1 = rng.uniform(1e-6, 1.0);
        CHECK(std::abs(oracle_coeff(p0, p1) - coeff_pair(-std::log(p0), -std::log(p1))) <= 1e-12);
    }
}

TEST_CASE("pseudo-label coefficients") {
    Rng rng(7);
    const ProbVector p = random_prob(rng, 5);
    for (PseudoLabel v : {PseudoLabel::AvgSoft, PseudoLabel::AvgHard, PseudoLabel::MidSoft, PseudoLabel::MidHard}) {
        CHECK(pseudo_label_coeff(v, p, p, &p) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(pseudo_label_from_string(to_string(v)) == v);
    }
    CHECK_THROWS_AS(pseudo_label_coeff(PseudoLabel::MidSoft, p, p, nullptr), Error);

    // p0 confident on class 2, p1 near uniform: the averaged hard label is 2.
    const ProbVector p0(vec({0.02, 0.02, 0.9, 0.03, 0.03}));
    const ProbVector p1(vec({0.19, 0.21, 0.2, 0.2, 0.2}));
    const double l = pseudo_label_coeff(PseudoLabel::AvgHard, p0, p1);
    const double want = 0.2 / (0.9 + 0.2);
    CHECK(l == doctest::Approx(want).epsilon(1e-12));
    CHECK(l < 0.5);

    // Soft variant by direct evaluation.
    const Eigen::VectorXd q = 0.5 * (p0.probs() + p1.probs());
    const double l0 = soft_xentropy(p0.probs(), q), l1 = soft_xentropy(p1.probs(), q);
    CHECK(pseudo_label_coeff(PseudoLabel::AvgSoft, p0, p1) ==
          doctest::Approx(std::exp(-l1) / (std::exp(-l0) + std::exp(-l1))).epsilon(1e-12));
}

TEST_CASE("correctness splits") {
    CHECK(correctness_split(3, 3, 3) == Split::TrueTrue);
    CHECK(correctness_split(3, 1, 3) == Split::TrueFalse);
    CHECK(correctness_split(1, 3, 3) == Split::FalseTrue);
    CHECK(correctness_split(1, 2, 3) == Split::FalseFalse);
}

TEST_CASE("pearson") {
    std::vector<double> x, y, z;
    for (int i = 0; i < 50; ++i) {
        x.push_back(i);
        y.push_back(3.0 * i - 2.0);
        z.push_back(-0.5 * i + 7.0);
    }
    CHECK(*pearson(x, y) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(*pearson(x, z) == doctest::Approx(-1.0).epsilon(1e-14));
    const std::vector<double> flat(50, 2.0);
    CHECK_FALSE(pearson(x, flat).has_value());
    const std::vector<double> one{1.0};
    CHECK_FALSE(pearson(one, one).has_value());

    Rng rng(8);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> a, b;
        for (int i = 0; i < 1000; ++i) {
            a.push_back(1e3 + rng.normal());
            b.push_back(0.3 * a.back() + rng.normal());
        }
        CHECK(std::abs(*pearson(a, b) - two_pass_pearson(a, b)) <= 1e-10);
    }
}

TEST_CASE("ratio correlation uses splits and guards zero denominators") {
    Rng rng(9);
    std::vector<Eigen::MatrixXd> probs(2, Eigen::MatrixXd(400, 4));
    std::vector<int> labels;
    for (int i = 0; i < 400; ++i) {
        for (auto& p : probs) p.row(i) = random_prob(rng, 4).probs().transpose();
        labels.push_back(static_cast<int>(rng.index(4)));
    }
    const auto records = make_records(probs, labels);
    const RatioCorrelation rc = ratio_correlation(records);
    std::size_t total = 0;
    for (std::size_t c : rc.counts) total += c;
    CHECK(total == 400);
    REQUIRE(rc.overall.has_value());

    std::vector<double> er, xr;
    for (const auto& r : records) {
        const double h = r.entropies[0] + r.entropies[1];
        const double l = (*r.xentropies)[0] + (*r.xentropies)[1];
        er.push_back(h == 0.0 ? 0.5 : r.entropies[0] / h);
        xr.push_back(l == 0.0 ? 0.5 : (*r.xentropies)[0] / l);
    }
    CHECK(std::abs(*rc.overall - two_pass_pearson(er, xr)) <= 1e-10);

    std::vector<ExpertiseRecord> unlabeled(records.begin(), records.end());
    for (auto& r : unlabeled) r.xentropies.reset();
    CHECK_THROWS_AS(ratio_correlation(unlabeled), Error);
}

TEST_CASE("coefficient CSV round trip") {
    Rng rng(10);
    Eigen::VectorXd l = testing::random_vector(rng, 30, 0.0, 1.0);
    const CoefficientBatch b = CoefficientBatch::from_pair(l, CoefficientMode::OffsetAdjusted);
    const std::string csv = coefficients_to_csv(b);
    CHECK(csv.rfind("sample_index,lambda_0,lambda_1,mode\n", 0) == 0);
    const CoefficientBatch back = coefficients_from_csv(csv);
    CHECK(back.coefficients == b.coefficients);
    CHECK(back.mode == b.mode);
    CHECK(coefficients_to_csv(back) == csv);
}

TEST_CASE("coefficient batches reject off-simplex rows") {
    CoefficientBatch b;
    b.coefficients = Eigen::MatrixXd(1, 2);
    b.coefficients << 0.7, 0.4;
    CHECK_THROWS_AS(b.validate(), Error);
}
