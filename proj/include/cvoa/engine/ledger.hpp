#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <mutex>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <cvoa/core/codec.hpp>
#include <cvoa/core/parameters.hpp>

namespace cvoa {

/// Outcome of offering a replicated candidate to the population.
enum class Disposition { AddedToNewInfected, Isolated, Ignored, Reinfected };

constexpr std::string_view to_string(Disposition d) noexcept {
    switch (d) {
    case Disposition::AddedToNewInfected: return "added";
    case Disposition::Isolated: return "isolated";
    case Disposition::Ignored: return "ignored";
    case Disposition::Reinfected: return "reinfected";
    }
    return "?";
}

/// Lock type for ledgers confined to one thread.
struct NullMutex {
    void lock() noexcept {}
    void unlock() noexcept {}
};

/// Dead and recovered membership sets plus the set of genotypes currently
/// held by some strain's new-infected population ("in flight").
///
/// Every operation on a genotype runs under the lock of the stripe that owns
/// it, so the full dead/recovered/in-flight decision for one genotype is
/// atomic. Invariants maintained:
///   dead ∩ recovered = ∅, recovered ∩ in_flight = ∅, dead only grows.
///
/// `deaths_total` counts deaths and `recovered_total` counts spreaders that
/// recovered after infecting; isolated candidates land in the recovered set
/// but are tallied apart in `isolated_total`. All three are cumulative and
/// never decrease, even when members leave `recovered` through reinfection.
template <Genotype G, typename Mutex = NullMutex>
class basic_ledger {
public:
    explicit basic_ledger(std::size_t stripes = 1) : stripes_(stripes == 0 ? 1 : stripes) {}

    basic_ledger(const basic_ledger&) = delete;
    basic_ledger& operator=(const basic_ledger&) = delete;

    bool is_dead(const G& g) const { return query(g, &Stripe::dead); }
    bool is_recovered(const G& g) const { return query(g, &Stripe::recovered); }
    bool is_in_flight(const G& g) const { return query(g, &Stripe::in_flight); }

    /// Moves `g` to dead. Returns false when it was already dead.
    bool kill(const G& g) {
        auto& s = stripe(g);
        std::lock_guard lock(s.mutex);
        if (!s.dead.insert(g).second) return false;
        s.recovered.erase(g);
        deaths_total_.fetch_add(1, std::memory_order_relaxed);
        return true;
    }

    /// Sends a spreader to recovered once it has finished infecting and
    /// counts the recovery. Dead genotypes and genotypes re-infected into a
    /// new-infected set stay out.
    bool recover(const G& g) {
        auto& s = stripe(g);
        std::lock_guard lock(s.mutex);
        if (s.dead.contains(g) || s.in_flight.contains(g)) return false;
        s.recovered.insert(g);
        recovered_total_.fetch_add(1, std::memory_order_relaxed);
        return true;
    }

    /// Decides the fate of a fresh candidate. `draw` yields uniform [0,1)
    /// numbers and is only called for the branch actually taken.
    ///
    /// dead -> Ignored; already in a new-infected set -> Ignored;
    /// not recovered -> isolation draw: above p_isolation joins new-infected,
    /// otherwise isolated into recovered; recovered -> reinfection draw: below
    /// p_reinfection leaves recovered and joins new-infected.
    template <typename Draw>
    Disposition admit(const G& g, const EpidemicParameters& params, Draw&& draw) {
        auto& s = stripe(g);
        std::lock_guard lock(s.mutex);
        if (s.dead.contains(g) || s.in_flight.contains(g)) return Disposition::Ignored;
        if (!s.recovered.contains(g)) {
            if (draw() > params.p_isolation) {
                s.in_flight.insert(g);
                return Disposition::AddedToNewInfected;
            }
            if (s.recovered.insert(g).second) isolated_total_.fetch_add(1, std::memory_order_relaxed);
            return Disposition::Isolated;
        }
        if (draw() < params.p_reinfection) {
            s.recovered.erase(g);
            s.in_flight.insert(g);
            return Disposition::Reinfected;
        }
        return Disposition::Ignored;
    }

    /// Drops `g` from the in-flight set (its owner promoted it to infected).
    void release(const G& g) {
        auto& s = stripe(g);
        std::lock_guard lock(s.mutex);
        s.in_flight.erase(g);
    }

    std::size_t deaths_total() const noexcept { return deaths_total_.load(std::memory_order_relaxed); }
    std::size_t recovered_total() const noexcept { return recovered_total_.load(std::memory_order_relaxed); }
    std::size_t isolated_total() const noexcept { return isolated_total_.load(std::memory_order_relaxed); }

    std::size_t dead_size() const { return total(&Stripe::dead); }
    std::size_t recovered_size() const { return total(&Stripe::recovered); }
    std::size_t in_flight_size() const { return total(&Stripe::in_flight); }

    std::vector<G> dead_members() const { return members(&Stripe::dead); }
    std::vector<G> recovered_members() const { return members(&Stripe::recovered); }

private:
    using Set = std::unordered_set<G>;

    struct Stripe {
        mutable Mutex mutex;
        Set dead;
        Set recovered;
        Set in_flight;
    };

    Stripe& stripe(const G& g) { return stripes_[std::hash<G>{}(g) % stripes_.size()]; }
    const Stripe& stripe(const G& g) const { return stripes_[std::hash<G>{}(g) % stripes_.size()]; }

    bool query(const G& g, Set Stripe::*which) const {
        const auto& s = stripe(g);
        std::lock_guard lock(s.mutex);
        return (s.*which).contains(g);
    }

    std::size_t total(Set Stripe::*which) const {
        std::size_t n = 0;
        for (const auto& s : stripes_) {
            std::lock_guard lock(s.mutex);
            n += (s.*which).size();
        }
        return n;
    }

    std::vector<G> members(Set Stripe::*which) const {
        std::vector<G> out;
        for (const auto& s : stripes_) {
            std::lock_guard lock(s.mutex);
            out.insert(out.end(), (s.*which).begin(), (s.*which).end());
        }
        return out;
    }

    std::vector<Stripe> stripes_;
    std::atomic<std::size_t> deaths_total_{0};
    std::atomic<std::size_t> recovered_total_{0};
    std::atomic<std::size_t> isolated_total_{0};
};

/// What the strain engine needs from a ledger.
template <typename L, typename G>
concept LedgerFor = requires(L& ledger, const G& g, const EpidemicParameters& params, double (*draw)()) {
    { ledger.is_dead(g) } -> std::same_as<bool>;
    { ledger.kill(g) } -> std::same_as<bool>;
    { ledger.recover(g) } -> std::same_as<bool>;
    { ledger.admit(g, params, draw) } -> std::same_as<Disposition>;
    ledger.release(g);
    { ledger.deaths_total() } -> std::convertible_to<std::size_t>;
    { ledger.recovered_total() } -> std::convertible_to<std::size_t>;
};

/// Ledger owned by a single strain.
template <Genotype G>
using PopulationLedger = basic_ledger<G, NullMutex>;

/// Ledger shared by concurrently running strains.
template <Genotype G>
class SharedLedger : public basic_ledger<G, std::mutex> {
public:
    static constexpr std::size_t default_stripes = 64;
    explicit SharedLedger(std::size_t stripes = default_stripes) : basic_ledger<G, std::mutex>(stripes) {}
};

} // namespace cvoa
