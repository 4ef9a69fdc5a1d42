#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "navsim/checkpoint.hpp"
#include "navsim/dqn.hpp"
#include "navsim/errors.hpp"
#include "test_util.hpp"

using namespace navsim;
using navsim::testing::kcs_model;
using navsim::testing::temp_dir;

namespace {

QNetwork random_net(std::vector<int> widths, std::uint64_t seed) {
    QNetwork net(std::move(widths));
    Rng rng(seed);
    net.init_weights(rng);
    return net;
}

// Loss used by the gradient checks: L = sum_i c_i * Q_i(x).
double linear_loss(const QNetwork& net, const std::vector<double>& x,
                   const std::vector<double>& c) {
    const std::vector<double> q = net.forward(x);
    double loss = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) loss += c[i] * q[i];
    return loss;
}

}  // namespace

TEST_CASE("forward of the zero network is zero") {
    QNetwork net({7, 8, 8, 5});
    const std::vector<double> obs(7, 1.3);
    for (double q : net.forward(obs)) CHECK(q == 0.0);
}

TEST_CASE("zero weights with output bias gives the bias") {
    QNetwork net({7, 8, 5});
    net.layers().back().biases = {0.1, -0.5, 2.0, 0.0, 1.0};
    const std::vector<double> obs(7, -4.2);
    const std::vector<double> q = net.forward(obs);
    CHECK(q[0] == doctest::Approx(0.1));
    CHECK(q[1] == doctest::Approx(-0.5));
    CHECK(q[2] == doctest::Approx(2.0));
    CHECK(q[3] == doctest::Approx(0.0));
    CHECK(q[4] == doctest::Approx(1.0));
}

TEST_CASE("forward rejects mismatched observation width") {
    QNetwork net({7, 8, 5});
    CHECK_THROWS_AS(net.forward(std::vector<double>(9, 0.0)), DimensionMismatchError);
}

TEST_CASE("analytic gradient matches central finite differences") {
    QNetwork net = random_net({3, 6, 4, 2}, 17);
    Rng rng(18);
    const std::vector<double> x{0.3, -0.7, 1.1};
    const std::vector<double> c{0.8, -1.2};

    ForwardTrace trace = forward_trace(net, x);
    NetGradient grad = NetGradient::zeros_like(net);
    backward(net, trace, c, grad);

    std::vector<double> flat_grad;
    for (const auto& layer : grad.layers) {
        flat_grad.insert(flat_grad.end(), layer.weights.begin(), layer.weights.end());
        flat_grad.insert(flat_grad.end(), layer.biases.begin(), layer.biases.end());
    }

    std::vector<double> theta = net.flatten();
    const double h = 1e-5;
    double worst = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double keep = theta[i];
        theta[i] = keep + h;
        net.unflatten(theta);
        const double up = linear_loss(net, x, c);
        theta[i] = keep - h;
        net.unflatten(theta);
        const double down = linear_loss(net, x, c);
        theta[i] = keep;
        const double numeric = (up - down) / (2.0 * h);
        const double denom = std::max({std::abs(numeric), std::abs(flat_grad[i]), 1e-8});
        worst = std::max(worst, std::abs(numeric - flat_grad[i]) / denom);
    }
    net.unflatten(theta);
    CHECK(worst <= 1e-5);
}

TEST_CASE("batch TD-loss gradient matches finite differences") {
    QNetwork net = random_net({4, 8, 5}, 23);
    Rng rng(24);

    std::vector<Transition> storage;
    for (int i = 0; i < 6; ++i) {
        Transition t;
        for (int k = 0; k < 4; ++k) t.state.push_back(rng.uniform(-2.0, 2.0));
        t.action = static_cast<int>(rng.uniform_int(5));
        t.reward = rng.uniform(-1.0, 1.0);
        t.next_state = t.state;
        t.done = true;  // targets reduce to rewards; loss depends only on net
        storage.push_back(t);
    }
    std::vector<const Transition*> batch;
    for (const Transition& t : storage) batch.push_back(&t);
    const std::vector<double> targets = td_targets(batch, net, 0.97);

    auto batch_loss = [&](const QNetwork& n) {
        double loss = 0.0;
        for (std::size_t i = 0; i < batch.size(); ++i) {
            const double q = n.forward(batch[i]->state)[batch[i]->action];
            const double err = q - targets[i];
            loss += err * err / static_cast<double>(batch.size());
        }
        return loss;
    };

    NetGradient grad = NetGradient::zeros_like(net);
    std::vector<double> out_grad(5, 0.0);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const ForwardTrace trace = forward_trace(net, batch[i]->state);
        const double err = trace.output[batch[i]->action] - targets[i];
        std::fill(out_grad.begin(), out_grad.end(), 0.0);
        out_grad[batch[i]->action] = 2.0 * err / static_cast<double>(batch.size());
        backward(net, trace, out_grad, grad);
    }
    std::vector<double> flat_grad;
    for (const auto& layer : grad.layers) {
        flat_grad.insert(flat_grad.end(), layer.weights.begin(), layer.weights.end());
        flat_grad.insert(flat_grad.end(), layer.biases.begin(), layer.biases.end());
    }

    std::vector<double> theta = net.flatten();
    const double h = 1e-5;
    double worst = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double keep = theta[i];
        theta[i] = keep + h;
        net.unflatten(theta);
        const double up = batch_loss(net);
        theta[i] = keep - h;
        net.unflatten(theta);
        const double down = batch_loss(net);
        theta[i] = keep;
        const double numeric = (up - down) / (2.0 * h);
        const double denom = std::max({std::abs(numeric), std::abs(flat_grad[i]), 1e-8});
        worst = std::max(worst, std::abs(numeric - flat_grad[i]) / denom);
    }
    net.unflatten(theta);
    CHECK(worst <= 1e-5);
}

TEST_CASE("epsilon-greedy behavior") {
    QNetwork net({7, 5});  // single affine layer
    net.layers().back().biases = {0.1, 0.9, 0.2, 0.2, 0.2};
    const std::vector<double> obs(7, 0.0);
    Rng rng(31);

    CHECK(act(net, obs, 0.0, rng) == 1);

    // Ties resolve to the lowest index.
    net.layers().back().biases = {0.5, 0.5, 0.2, 0.5, 0.1};
    CHECK(act(net, obs, 0.0, rng) == 0);

    // Pure argmax is invariant to a positive affine rescaling of Q.
    QNetwork scaled = net;
    for (double& b : scaled.layers().back().biases) b = 3.7 * b + 11.0;
    CHECK(act(scaled, obs, 0.0, rng) == act(net, obs, 0.0, rng));

    // Full exploration is uniform.
    int counts[5] = {0, 0, 0, 0, 0};
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) counts[act(net, obs, 1.0, rng)]++;
    for (int c : counts) {
        CHECK(std::abs(static_cast<double>(c) / draws - 0.2) < 0.01);
    }
}

TEST_CASE("exploration schedule is linear from 1 to 0") {
    CHECK(epsilon_at(0, 9000) == 1.0);
    CHECK(epsilon_at(9000, 9000) == 0.0);
    CHECK(epsilon_at(4500, 9000) == 0.5);
}

TEST_CASE("learning-rate schedule matches the table values") {
    const TrainConfig cfg = TrainConfig::defaults_for(ObsMode::Static);
    CHECK(lr_at(0, cfg) == doctest::Approx(7.5e-4).epsilon(1e-12));
    CHECK(lr_at(50000, cfg) == doctest::Approx(3.0e-4).epsilon(1e-12));
    CHECK(lr_at(25000, cfg) ==
          doctest::Approx(7.5e-4 * std::pow(0.4, 0.5)).epsilon(1e-12));

    // Continuous decay by default; the staircase variant holds between drops.
    TrainConfig stair = cfg;
    stair.staircase_lr = true;
    CHECK(lr_at(25000, stair) == doctest::Approx(7.5e-4));
    CHECK(lr_at(50000, stair) == doctest::Approx(3.0e-4));

    const TrainConfig dyn = TrainConfig::defaults_for(ObsMode::Dynamic);
    CHECK(lr_at(50000, dyn) == doctest::Approx(7.5e-4 * 0.5).epsilon(1e-12));
}

TEST_CASE("TD targets") {
    QNetwork target({7, 5});
    target.layers().back().biases = {1.0, 2.0, 0.0, -1.0, 0.5};  // max Q = 2

    Transition terminal;
    terminal.state.assign(7, 0.0);
    terminal.next_state.assign(7, 0.0);
    terminal.action = 0;
    terminal.reward = 20.0;
    terminal.done = true;

    Transition running = terminal;
    running.reward = 1.0;
    running.done = false;

    std::vector<const Transition*> batch{&terminal, &running};
    const std::vector<double> y = td_targets(batch, target, 0.97);
    CHECK(y[0] == doctest::Approx(20.0));
    CHECK(y[1] == doctest::Approx(1.0 + 0.97 * 2.0));

    const std::vector<double> myopic = td_targets(batch, target, 0.0);
    CHECK(myopic[0] == doctest::Approx(20.0));
    CHECK(myopic[1] == doctest::Approx(1.0));
}

TEST_CASE("update with targets equal to predictions is a fixed point") {
    QNetwork net = random_net({4, 6, 5}, 41);
    const QNetwork before = net;
    Adam adam(net);

    std::vector<Transition> storage;
    Rng rng(42);
    for (int i = 0; i < 4; ++i) {
        Transition t;
        for (int k = 0; k < 4; ++k) t.state.push_back(rng.uniform(-1.0, 1.0));
        t.action = i % 5;
        t.next_state = t.state;
        t.done = true;
        t.reward = net.forward(t.state)[t.action];  // target == prediction
        storage.push_back(t);
    }
    std::vector<const Transition*> batch;
    for (const Transition& t : storage) batch.push_back(&t);

    const double loss = update(net, net, batch, 0.97, 1e-3, adam);
    CHECK(loss == 0.0);
    CHECK(net.flatten() == before.flatten());  // zero gradient moves nothing
}

TEST_CASE("repeated updates on one batch overfit it") {
    QNetwork net = random_net({4, 16, 5}, 51);
    QNetwork target = net;
    Adam adam(net);
    Rng rng(52);

    std::vector<Transition> storage;
    for (int i = 0; i < 8; ++i) {
        Transition t;
        for (int k = 0; k < 4; ++k) t.state.push_back(rng.uniform(-1.0, 1.0));
        t.action = static_cast<int>(rng.uniform_int(5));
        t.reward = rng.uniform(-5.0, 5.0);
        t.next_state = t.state;
        t.done = true;
        storage.push_back(t);
    }
    std::vector<const Transition*> batch;
    for (const Transition& t : storage) batch.push_back(&t);

    std::vector<double> losses;
    for (int i = 0; i < 200; ++i) {
        losses.push_back(update(net, target, batch, 0.97, 3e-3, adam));
    }
    for (std::size_t i = 10; i + 1 < losses.size(); ++i) {
        CHECK(losses[i + 1] <= losses[i] + 1e-12);
    }
    CHECK(losses.back() < 0.05 * losses.front());
}

TEST_CASE("polyak averaging") {
    QNetwork net = random_net({4, 6, 5}, 61);

    QNetwork same = net;
    polyak(same, net, 0.01);
    {
        // tau*x + (1-tau)*x re-rounds; identity holds to one ulp.
        const std::vector<double> a = same.flatten();
        const std::vector<double> b = net.flatten();
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-15));
        }
    }

    QNetwork hard = random_net({4, 6, 5}, 62);
    polyak(hard, net, 1.0);
    CHECK(hard.flatten() == net.flatten());

    QNetwork zero({4, 6, 5});
    QNetwork ones({4, 6, 5});
    for (auto& layer : ones.layers()) {
        std::fill(layer.weights.begin(), layer.weights.end(), 1.0);
        std::fill(layer.biases.begin(), layer.biases.end(), 1.0);
    }
    polyak(zero, ones, 0.01);
    for (double p : zero.flatten()) CHECK(p == doctest::Approx(0.01));

    QNetwork wrong({5, 6, 5});
    CHECK_THROWS_AS(polyak(wrong, net, 0.5), ShapeMismatchError);
}

TEST_CASE("polyak contraction toward frozen parameters") {
    const QNetwork frozen = random_net({4, 6, 5}, 71);
    QNetwork target = random_net({4, 6, 5}, 72);

    auto dist = [&](const QNetwork& a) {
        const std::vector<double> fa = a.flatten();
        const std::vector<double> fb = frozen.flatten();
        double acc = 0.0;
        for (std::size_t i = 0; i < fa.size(); ++i) {
            acc += (fa[i] - fb[i]) * (fa[i] - fb[i]);
        }
        return std::sqrt(acc);
    };

    const double initial = dist(target);
    const double tau = 0.01;
    for (int k = 1; k <= 200; ++k) {
        polyak(target, frozen, tau);
        const double expected = std::pow(1.0 - tau, k) * initial;
        CHECK(std::abs(dist(target) - expected) <= 1e-12 * std::max(1.0, expected));
    }
}

TEST_CASE("replay buffer overwrites oldest entries first") {
    ReplayBuffer buf(8);
    for (int i = 0; i < 11; ++i) {
        Transition t;
        t.reward = static_cast<double>(i);
        buf.push(std::move(t));
    }
    CHECK(buf.size() == 8);
    // 0, 1, 2 are gone; 3..10 remain.
    std::vector<bool> seen(11, false);
    for (std::size_t i = 0; i < buf.size(); ++i) {
        seen[static_cast<std::size_t>(buf.at(i).reward)] = true;
    }
    for (int i = 0; i < 3; ++i) CHECK(!seen[i]);
    for (int i = 3; i < 11; ++i) CHECK(seen[i]);
}

TEST_CASE("replay sampling is uniform (chi-square, p > 0.001)") {
    const std::size_t capacity = 100000;
    ReplayBuffer buf(capacity);
    for (std::size_t i = 0; i < capacity; ++i) {
        Transition t;
        t.reward = static_cast<double>(i);
        buf.push(std::move(t));
    }
    Rng rng(81);
    constexpr int kBins = 100;
    std::vector<int> counts(kBins, 0);
    const int samples = 100000;
    const auto batch = buf.sample(samples, rng);
    for (const Transition* t : batch) {
        const auto idx = static_cast<std::size_t>(t->reward);
        counts[idx * kBins / capacity]++;
    }
    const double expected = static_cast<double>(samples) / kBins;
    double chi2 = 0.0;
    for (int c : counts) {
        chi2 += (c - expected) * (c - expected) / expected;
    }
    // 99 degrees of freedom; the 0.999 quantile is 148.23.
    CHECK(chi2 < 148.23);
}

TEST_CASE("training is deterministic from the seed") {
    TrainConfig cfg = TrainConfig::defaults_for(ObsMode::Static);
    cfg.episodes = 4;
    cfg.max_steps = 30;
    cfg.hidden = {12};
    cfg.batch_size = 16;
    cfg.buffer_capacity = 512;
    cfg.update_every = 5;
    cfg.checkpoint_every = 0;
    cfg.seed = 7;

    const std::string dir_a = temp_dir("train_a");
    const std::string dir_b = temp_dir("train_b");
    const TrainResult ra = train(kcs_model(), cfg, dir_a);
    const TrainResult rb = train(kcs_model(), cfg, dir_b);

    REQUIRE(ra.log.size() == rb.log.size());
    for (std::size_t i = 0; i < ra.log.size(); ++i) {
        CHECK(ra.log[i].episode_return == rb.log[i].episode_return);
        CHECK(ra.log[i].steps == rb.log[i].steps);
        CHECK(ra.log[i].status == rb.log[i].status);
    }

    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    };
    CHECK(slurp(ra.log_path) == slurp(rb.log_path));
    CHECK(slurp(ra.final_checkpoint) == slurp(rb.final_checkpoint));
    CHECK(!slurp(ra.final_checkpoint).empty());
}

TEST_CASE("training log carries the moving-average window") {
    TrainConfig cfg = TrainConfig::defaults_for(ObsMode::Static);
    cfg.episodes = 5;
    cfg.max_steps = 10;
    cfg.hidden = {8};
    cfg.batch_size = 8;
    cfg.buffer_capacity = 256;
    cfg.checkpoint_every = 0;
    cfg.seed = 3;
    const TrainResult r = train(kcs_model(), cfg, temp_dir("train_ma"));
    REQUIRE(r.log.size() == 5);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.log.size(); ++i) {
        acc += r.log[i].episode_return;
        CHECK(r.log[i].avg100 ==
              doctest::Approx(acc / static_cast<double>(i + 1)).epsilon(1e-12));
        CHECK(r.log[i].epsilon == doctest::Approx(1.0 - static_cast<double>(i) / 5.0));
    }
}

TEST_CASE("evaluate rejects empty scenario lists and wrong dimensions") {
    const QNetwork net = random_net({7, 8, 5}, 91);
    CHECK_THROWS_AS(evaluate(net, kcs_model(), {}), EmptyListError);

    EpisodeSpec dyn;
    dyn.mode = ObsMode::Dynamic;
    dyn.waypoints = {{0.0, 0.0}, {10.0, 0.0}};
    CHECK_THROWS_AS(evaluate(net, kcs_model(), {dyn}), DimensionMismatchError);
}

TEST_CASE("a straight-running policy succeeds on an on-axis goal") {
    // Q-network that always prefers rudder amidships.
    QNetwork net({7, 5});
    net.layers().back().biases = {0.0, 0.0, 1.0, 0.0, 0.0};

    EpisodeSpec spec;
    spec.mode = ObsMode::Static;
    spec.waypoints = {{0.0, 0.0}, {11.0, 0.0}};
    const EvalMetrics m = evaluate(net, kcs_model(), {spec});
    CHECK(m.episodes == 1);
    CHECK(m.success_rate == 1.0);
    CHECK(m.per_episode[0].status == Status::Success);
    CHECK(m.mean_cte_rms < 1e-9);
}

TEST_CASE("divergent training aborts with the last good checkpoint") {
    TrainConfig cfg = TrainConfig::defaults_for(ObsMode::Static);
    cfg.obstacles = false;
    cfg.episodes = 10;
    cfg.max_steps = 20;
    cfg.hidden = {8};
    cfg.batch_size = 8;
    cfg.buffer_capacity = 64;
    cfg.update_every = 4;
    cfg.checkpoint_every = 0;
    cfg.seed = 13;
    cfg.lr0 = 1e300;  // guarantees a non-finite TD loss within a few updates

    const std::string dir = temp_dir("train_abort");
    CHECK_THROWS_AS(train(kcs_model(), cfg, dir), NonFiniteLossError);

    // The last good parameters are still on disk and finite.
    const Checkpoint ckpt = load_checkpoint(dir + "/ckpt_final.navsim");
    for (double p : ckpt.net.flatten()) CHECK(std::isfinite(p));
}

TEST_CASE("dynamic-mode training runs with the 9-input network") {
    TrainConfig cfg = TrainConfig::defaults_for(ObsMode::Dynamic);
    cfg.episodes = 3;
    cfg.max_steps = 15;
    cfg.hidden = {8};
    cfg.batch_size = 8;
    cfg.buffer_capacity = 128;
    cfg.update_every = 5;
    cfg.checkpoint_every = 0;
    cfg.seed = 21;
    CHECK(cfg.observation_dim() == 9);
    CHECK(cfg.update_every == 5);   // dynamic default per the hyperparameter table
    CHECK(cfg.decay_rate == 0.5);

    const TrainResult r = train(kcs_model(), cfg, temp_dir("train_dyn"));
    CHECK(r.log.size() == 3);
    const Checkpoint ckpt = load_checkpoint(r.final_checkpoint);
    CHECK(ckpt.net.input_dim() == 9);
}

TEST_CASE("config defaults carry the published hyperparameter table") {
    const TrainConfig s = TrainConfig::defaults_for(ObsMode::Static);
    CHECK(s.lr0 == 7.5e-4);
    CHECK(s.decay_steps == 50000.0);
    CHECK(s.decay_rate == 0.4);
    CHECK(s.hidden == std::vector<int>{128, 128});
    CHECK(s.gamma == 0.97);
    CHECK(s.batch_size == 128);
    CHECK(s.buffer_capacity == 100000);
    CHECK(s.episodes == 9000);
    CHECK(s.update_every == 10);
    CHECK(s.target_update_every == 1);
    CHECK(s.tau == 0.01);

    const TrainConfig d = TrainConfig::defaults_for(ObsMode::Dynamic);
    CHECK(d.decay_rate == 0.5);
    CHECK(d.episodes == 8000);
    CHECK(d.update_every == 5);
    CHECK(d.lr0 == 7.5e-4);

    CHECK_THROWS_AS(TrainConfig::from_json_text(R"({"mode":"static","bogus":1})"),
                    UnknownKeyError);
    CHECK_THROWS_AS(TrainConfig::from_json_text(R"({"gamma":1.5})"), InputError);
}
