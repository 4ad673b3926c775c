#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ponzi/classifier.hpp"
#include "ponzi/eval.hpp"
#include "ponzi/rng.hpp"

using namespace ponzi;

namespace {

// Independent softmax recomputation in extended precision.
std::array<long double, 2> softmax_oracle(const EmbeddingVector& z, const ClassifierParams& p) {
    long double u0 = p.b[0], u1 = p.b[1];
    for (int j = 0; j < p.embed_dim; ++j) {
        u0 += static_cast<long double>(p.w[static_cast<std::size_t>(j)]) * z[static_cast<std::size_t>(j)];
        u1 += static_cast<long double>(p.w[static_cast<std::size_t>(p.embed_dim + j)]) * z[static_cast<std::size_t>(j)];
    }
    long double e0 = std::exp(u0), e1 = std::exp(u1);
    return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

struct Pools {
    std::vector<EmbeddingVector> labeled_z, unlabeled_z, heldout_z;
    std::vector<int> labeled_y, heldout_y;
};

// Two gaussian clusters with mild overlap; a handful of labels, the rest
// unlabeled, plus a held-out evaluation set.
Pools two_cluster_pools(std::uint64_t seed, int labeled_per_class, int unlabeled_per_class,
                        int heldout_per_class) {
    Pools pools;
    Rng rng(seed);
    auto sample = [&](int cls) {
        EmbeddingVector z(4);
        double mu = cls == 1 ? 1.0 : -1.0;
        z[0] = mu + 0.9 * rng.next_gaussian();
        z[1] = 0.5 * mu + 1.1 * rng.next_gaussian();
        z[2] = rng.next_gaussian();
        z[3] = 1.0;
        return z;
    };
    for (int cls = 0; cls <= 1; ++cls) {
        for (int i = 0; i < labeled_per_class; ++i) {
            pools.labeled_z.push_back(sample(cls));
            pools.labeled_y.push_back(cls);
        }
        for (int i = 0; i < unlabeled_per_class; ++i) pools.unlabeled_z.push_back(sample(cls));
        for (int i = 0; i < heldout_per_class; ++i) {
            pools.heldout_z.push_back(sample(cls));
            pools.heldout_y.push_back(cls);
        }
    }
    return pools;
}

double heldout_f1(const Pools& pools, const ClassifierParams& params) {
    std::vector<int> preds;
    for (const auto& z : pools.heldout_z) {
        auto p = predict_proba(z, params);
        preds.push_back(p[1] > p[0] ? 1 : 0);
    }
    Metrics m = metrics(confusion(preds, pools.heldout_y));
    return m.f1 ? *m.f1 : 0.0;
}

}  // namespace

TEST_CASE("predict_proba: zero parameters give the uniform pair") {
    auto p = ClassifierParams::zeros(3);
    auto probs = predict_proba({0.5, -2.0, 7.0}, p);
    CHECK(probs[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(probs[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("predict_proba: a large class-1 bias saturates") {
    auto p = ClassifierParams::zeros(2);
    p.b = {0.0, 20.0};
    auto probs = predict_proba({1.0, 1.0}, p);
    CHECK(probs[1] > 0.9999);
}

TEST_CASE("predict_proba matches the softmax oracle and sums to one") {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        ClassifierParams p = ClassifierParams::zeros(5);
        for (auto& w : p.w) w = rng.next_gaussian();
        p.b = {rng.next_gaussian(), rng.next_gaussian()};
        EmbeddingVector z(5);
        for (auto& x : z) x = rng.next_gaussian();
        auto got = predict_proba(z, p);
        auto want = softmax_oracle(z, p);
        CHECK(std::abs(got[0] - static_cast<double>(want[0])) < 1e-12);
        CHECK(std::abs(got[1] - static_cast<double>(want[1])) < 1e-12);
        CHECK(std::abs(got[0] + got[1] - 1.0) < 1e-12);
    }
}

TEST_CASE("supervised_loss: perfect predictions approach zero, uniform gives N log 2") {
    auto p = ClassifierParams::zeros(2);
    p.b = {0.0, 50.0};
    std::vector<EmbeddingVector> z = {{1, 0}, {0, 1}};
    std::vector<int> ones = {1, 1};
    CHECK(supervised_loss(z, ones, p) < 1e-12);

    auto uniform = ClassifierParams::zeros(2);
    std::vector<int> y = {0, 1};
    CHECK(supervised_loss(z, y, uniform) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("supervised_loss: hand-set probabilities 0.9 / 0.8 / 0.6") {
    // One-hot embeddings route a distinct class-1 logit to each sample.
    ClassifierParams p = ClassifierParams::zeros(3);
    p.w[3 + 0] = std::log(9.0);    // p1 = 0.9
    p.w[3 + 1] = std::log(0.25);   // p1 = 0.2 -> p0 = 0.8
    p.w[3 + 2] = std::log(1.5);    // p1 = 0.6
    std::vector<EmbeddingVector> z = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    std::vector<int> y = {1, 0, 1};
    double expected = -(std::log(0.9) + std::log(0.8) + std::log(0.6));
    CHECK(supervised_loss(z, y, p) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.8393).epsilon(1e-4));
}

TEST_CASE("select_pseudo: spec example and edge thresholds") {
    std::vector<std::array<double, 2>> probas = {{0.95, 0.05}, {0.6, 0.4}, {0.08, 0.92}};
    auto set = select_pseudo(probas, 0.9);
    REQUIRE(set.indices == std::vector<std::size_t>{0, 2});
    CHECK(set.labels == std::vector<int>{0, 1});
    CHECK(set.confidences[0] >= 0.9);

    CHECK(select_pseudo(probas, 1.0).indices.empty());
    CHECK(select_pseudo(probas, 0.51).indices.size() == 3);
}

TEST_CASE("select_pseudo: lower thresholds select supersets") {
    Rng rng(123);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::array<double, 2>> probas;
        for (int i = 0; i < 30; ++i) {
            double p1 = rng.next_double();
            probas.push_back({1.0 - p1, p1});
        }
        double t1 = 0.51 + 0.48 * rng.next_double();
        double t2 = t1 + (1.0 - t1) * rng.next_double();
        auto s1 = select_pseudo(probas, t1);
        auto s2 = select_pseudo(probas, t2);
        for (auto idx : s2.indices)
            CHECK(std::find(s1.indices.begin(), s1.indices.end(), idx) != s1.indices.end());
    }
}

TEST_CASE("pseudo_loss: empty set, single confident sample, definitional equality") {
    ClassifierParams p = ClassifierParams::zeros(2);
    p.b = {0.0, std::log(9.0)};  // p1 = 0.9 everywhere
    std::vector<EmbeddingVector> unlabeled = {{0, 0}, {0, 0}};

    PseudoLabelSet empty;
    CHECK(pseudo_loss(unlabeled, empty, p) == 0.0);

    PseudoLabelSet one;
    one.indices = {0};
    one.labels = {1};
    one.confidences = {0.9};
    CHECK(pseudo_loss(unlabeled, one, p) == doctest::Approx(-std::log(0.9)).epsilon(1e-12));

    // Equals supervised_loss on the selected subset with the hard labels.
    PseudoLabelSet both;
    both.indices = {0, 1};
    both.labels = {1, 0};
    both.confidences = {0.9, 0.9};
    std::vector<EmbeddingVector> subset = {unlabeled[0], unlabeled[1]};
    std::vector<int> labels = {1, 0};
    CHECK(pseudo_loss(unlabeled, both, p) ==
          doctest::Approx(supervised_loss(subset, labels, p)).epsilon(1e-12));
}

TEST_CASE("total loss decomposes as lambda1 * L_sup + lambda2 * L_pseudo") {
    Rng rng(55);
    Pools pools = two_cluster_pools(9, 3, 10, 0);
    ClassifierParams p = ClassifierParams::zeros(4);
    for (auto& w : p.w) w = 0.3 * rng.next_gaussian();
    SelfTrainConfig cfg;
    cfg.lambda1 = 1.0;
    cfg.lambda2 = 0.85;
    std::vector<std::array<double, 2>> probas;
    for (const auto& z : pools.unlabeled_z) probas.push_back(predict_proba(z, p));
    PseudoLabelSet set = select_pseudo(probas, 0.6);
    double total = total_loss(pools.labeled_z, pools.labeled_y, pools.unlabeled_z, set, cfg, p);
    double sup = supervised_loss(pools.labeled_z, pools.labeled_y, p);
    double pseudo = pseudo_loss(pools.unlabeled_z, set, p, cfg.pseudo_mode);
    CHECK(std::abs(total - (cfg.lambda1 * sup + cfg.lambda2 * pseudo)) < 1e-12);
}

TEST_CASE("total_loss_grad matches finite differences in both pseudo modes") {
    Rng rng(66);
    Pools pools = two_cluster_pools(10, 3, 8, 0);
    for (PseudoLossMode mode : {PseudoLossMode::HardLabel, PseudoLossMode::Entropy}) {
        ClassifierParams p = ClassifierParams::zeros(4);
        for (auto& w : p.w) w = 0.4 * rng.next_gaussian();
        p.b = {0.1 * rng.next_gaussian(), 0.1 * rng.next_gaussian()};
        SelfTrainConfig cfg;
        cfg.pseudo_mode = mode;
        std::vector<std::array<double, 2>> probas;
        for (const auto& z : pools.unlabeled_z) probas.push_back(predict_proba(z, p));
        PseudoLabelSet set = select_pseudo(probas, 0.55);
        REQUIRE(!set.indices.empty());

        auto loss_at = [&](const ClassifierParams& params) {
            return total_loss(pools.labeled_z, pools.labeled_y, pools.unlabeled_z, set, cfg,
                              params);
        };
        ClassifierGrads grads =
            total_loss_grad(pools.labeled_z, pools.labeled_y, pools.unlabeled_z, set, cfg, p);
        auto check_coord = [&](double& slot, double got) {
            double h = 1e-6;
            double saved = slot;
            slot = saved + h;
            double up = loss_at(p);
            slot = saved - h;
            double down = loss_at(p);
            slot = saved;
            double fd = (up - down) / (2.0 * h);
            double denom = std::max({std::abs(fd), std::abs(got), 1e-3});
            CHECK(std::abs(fd - got) / denom < 1e-5);
        };
        for (std::size_t i = 0; i < p.w.size(); ++i) check_coord(p.w[i], grads.w[i]);
        check_coord(p.b[0], grads.b[0]);
        check_coord(p.b[1], grads.b[1]);
    }
}

TEST_CASE("self_train: rejects single-class labeled pools") {
    std::vector<EmbeddingVector> z = {{1, 0}, {2, 0}};
    std::vector<int> y = {1, 1};
    SelfTrainConfig cfg;
    CHECK_THROWS_AS(self_train(z, y, {}, cfg), SingleClassPool);
    CHECK_THROWS_AS(self_train({}, {}, {}, cfg), SingleClassPool);
}

TEST_CASE("self_train: empty unlabeled pool reduces to supervised training") {
    Pools pools = two_cluster_pools(20, 8, 0, 20);
    SelfTrainConfig cfg;
    cfg.inner_epochs = 150;
    cfg.learning_rate = 0.05;
    int iterations = -1;
    auto params = self_train(pools.labeled_z, pools.labeled_y, {}, cfg, &iterations);
    CHECK(heldout_f1(pools, params) > 0.7);
    CHECK(iterations <= cfg.max_iterations);
}

TEST_CASE("self_train: max_iterations = 0 returns the initial supervised fit") {
    Pools pools = two_cluster_pools(21, 4, 12, 0);
    SelfTrainConfig cfg;
    cfg.max_iterations = 0;
    cfg.inner_epochs = 60;
    auto params = self_train(pools.labeled_z, pools.labeled_y, pools.unlabeled_z, cfg);

    // Reference: the same supervised-only gradient descent, replicated here.
    ClassifierParams ref = ClassifierParams::zeros(4);
    SelfTrainConfig ref_cfg = cfg;
    PseudoLabelSet empty;
    for (int epoch = 0; epoch < cfg.inner_epochs; ++epoch) {
        ClassifierGrads g = total_loss_grad(pools.labeled_z, pools.labeled_y, pools.unlabeled_z,
                                            empty, ref_cfg, ref);
        for (std::size_t i = 0; i < ref.w.size(); ++i) ref.w[i] -= cfg.learning_rate * g.w[i];
        ref.b[0] -= cfg.learning_rate * g.b[0];
        ref.b[1] -= cfg.learning_rate * g.b[1];
    }
    CHECK(params.w == ref.w);
    CHECK(params.b == ref.b);
}

TEST_CASE("self_train: terminates and pseudo-labels help at 25% labels") {
    // 25% of each class labeled; the rest feeds the unlabeled pool.
    Pools pools = two_cluster_pools(31415, 2, 6, 30);
    SelfTrainConfig st;
    st.inner_epochs = 120;
    st.learning_rate = 0.05;
    st.theta = 0.9;
    st.max_iterations = 10;
    int iterations = -1;
    auto with_pseudo = self_train(pools.labeled_z, pools.labeled_y, pools.unlabeled_z, st,
                                  &iterations);
    CHECK(iterations <= st.max_iterations);

    SelfTrainConfig sup_only = st;
    sup_only.max_iterations = 0;
    auto supervised = self_train(pools.labeled_z, pools.labeled_y, pools.unlabeled_z, sup_only);

    double f1_pseudo = heldout_f1(pools, with_pseudo);
    double f1_sup = heldout_f1(pools, supervised);
    CHECK(f1_pseudo >= f1_sup);
}

TEST_CASE("self_train: deterministic under identical inputs") {
    Pools pools = two_cluster_pools(77, 3, 9, 0);
    SelfTrainConfig cfg;
    cfg.inner_epochs = 40;
    auto a = self_train(pools.labeled_z, pools.labeled_y, pools.unlabeled_z, cfg);
    auto b = self_train(pools.labeled_z, pools.labeled_y, pools.unlabeled_z, cfg);
    CHECK(a.w == b.w);
    CHECK(a.b == b.b);
}
