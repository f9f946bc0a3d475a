#include "gract/dataset.hpp"
#include "gract/error.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace gract {

namespace {

enum class Behavior { Stationary, Straight, RandomWalk };

class Mover {
public:
    Mover(std::mt19937_64& rng, Behavior b, std::uint32_t w, std::uint32_t h, std::int32_t max_speed)
        : rng_(rng), behavior_(b), w_(static_cast<std::int32_t>(w)), h_(static_cast<std::int32_t>(h)),
          max_speed_(max_speed) {
        x_ = uniform(0, w_ - 1);
        y_ = uniform(0, h_ - 1);
        if (behavior_ == Behavior::Straight) {
            do {
                vx_ = uniform(-max_speed_, max_speed_);
                vy_ = uniform(-max_speed_, max_speed_);
            } while (vx_ == 0 && vy_ == 0);
        }
    }

    Cell cell() const { return {x_, y_}; }

    void step(double turn_probability) {
        if (behavior_ == Behavior::Stationary) return;
        if (behavior_ == Behavior::RandomWalk) {
            vx_ = uniform(-1, 1);
            vy_ = uniform(-1, 1);
        } else if (std::bernoulli_distribution(turn_probability)(rng_)) {
            std::int32_t& v = uniform(0, 1) ? vx_ : vy_;
            v = std::clamp(v + (uniform(0, 1) ? 1 : -1), -max_speed_, max_speed_);
            if (vx_ == 0 && vy_ == 0) v = 1;
        }
        x_ = bounce(x_, vx_, w_);
        y_ = bounce(y_, vy_, h_);
    }

private:
    std::int32_t uniform(std::int32_t lo, std::int32_t hi) {
        return std::uniform_int_distribution<std::int32_t>(lo, hi)(rng_);
    }

    // Reflects the velocity at the borders.
    static std::int32_t bounce(std::int32_t p, std::int32_t& v, std::int32_t extent) {
        std::int32_t n = p + v;
        if (n < 0 || n >= extent) {
            v = -v;
            n = std::clamp(p + v, 0, extent - 1);
        }
        return n;
    }

    std::mt19937_64& rng_;
    Behavior behavior_;
    std::int32_t w_, h_, max_speed_;
    std::int32_t x_ = 0, y_ = 0, vx_ = 0, vy_ = 0;
};

} // namespace

RegularDataset gen_synthetic(std::uint32_t num_objects, std::uint32_t num_instants, std::uint32_t width,
                             std::uint32_t height, const BehaviorMix& mix, std::uint64_t seed) {
    if (width == 0 || height == 0) throw ValidationError("grid must be non-empty");
    if (mix.stationary < 0 || mix.straight < 0 || mix.random_walk < 0 ||
        mix.stationary + mix.straight + mix.random_walk <= 0)
        throw ValidationError("behaviour weights must be non-negative and not all zero");
    if (mix.gap_fraction < 0 || mix.gap_fraction > 1) throw ValidationError("gap fraction must be in [0, 1]");
    if (mix.max_speed < 1) throw ValidationError("max speed must be at least 1");

    GridConfig g;
    g.width = width;
    g.height = height;
    std::vector<std::string> names;
    names.reserve(num_objects);
    for (std::uint32_t o = 0; o < num_objects; ++o) names.push_back("obj" + std::to_string(o));
    RegularDataset ds(g, num_instants, std::move(names));
    if (num_instants == 0) return ds;

    std::mt19937_64 rng(seed);
    std::discrete_distribution<int> pick({mix.stationary, mix.straight, mix.random_walk});
    std::bernoulli_distribution gappy(mix.gap_fraction);
    std::vector<bool> visible(num_instants);
    for (ObjectId o = 0; o < num_objects; ++o) {
        Mover m(rng, static_cast<Behavior>(pick(rng)), width, height, mix.max_speed);

        std::fill(visible.begin(), visible.end(), true);
        if (gappy(rng)) {
            auto uniform = [&](std::uint32_t lo, std::uint32_t hi) {
                return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
            };
            const std::uint32_t max_gap = std::max<std::uint32_t>(2, num_instants / 8);
            const std::uint32_t gaps = uniform(1, 3);
            for (std::uint32_t k = 0; k < gaps; ++k) {
                const std::uint32_t start = uniform(0, num_instants - 1);
                const std::uint32_t len = uniform(1, max_gap);
                for (std::uint32_t t = start; t < num_instants && t < start + len; ++t) visible[t] = false;
            }
            // Some objects join late or leave early.
            if (uniform(0, 3) == 0) {
                const std::uint32_t cut = uniform(0, num_instants / 4);
                if (uniform(0, 1))
                    std::fill(visible.begin(), visible.begin() + cut, false);
                else
                    std::fill(visible.end() - cut, visible.end(), false);
            }
            if (std::none_of(visible.begin(), visible.end(), [](bool v) { return v; }))
                visible[uniform(0, num_instants - 1)] = true;
        }
        // Motion continues while the object is unseen.
        for (Instant t = 0; t < num_instants; ++t) {
            if (t > 0) m.step(mix.turn_probability);
            if (visible[t]) ds.set(o, t, m.cell());
        }
    }
    return ds;
}

} // namespace gract
