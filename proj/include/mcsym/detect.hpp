#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mcsym/autograph.hpp"
#include "mcsym/mcs.hpp"
#include "mcsym/perm.hpp"

namespace mcsym {

enum class GapMode {
    shared,
    /// Foreign atoms and own atoms read by other contexts get singleton
    /// colours, so only local symmetries survive.
    local_only,
};

struct GapVertex {
    Atom atom;
    bool positive = true;
};

/// Coloured digraph of one context: a positive and a negative literal
/// vertex for every occurring own atom and every atom in its bridge rules,
/// and one body vertex per rule and bridge rule.
struct GapGraph {
    int context = 0;
    ColouredDigraph graph;
    std::vector<std::optional<GapVertex>> atom_of_vertex;  // nullopt for body vertices
    std::map<Atom, int> positive;
    std::map<Atom, int> negative;
    /// A_k ∪ aux_k ∪ atom(br_k): domain of the translated permutations.
    AtomSet domain;
};

GapGraph build_gap(const MultiContextSystem& m, int k, GapMode mode = GapMode::shared);

/// Throws InvariantError if p is not an automorphism or mates
/// literal vertices inconsistently.
Permutation graph_perm_to_partial_symmetry(const GapGraph& g, const VertexPermutation& p);

inline constexpr std::size_t default_message_cap = 4096;

struct SymmetrySet {
    PermSet perms;
    /// Generators behind `perms` where known (LSD results only).
    PermSet generators;
    /// False when a cap was hit and `perms` is a sound subset.
    bool complete = true;
};

/// All partial symmetries of M w.r.t. {C_k}: closure of the translated
/// automorphism generators of gap(C_k). Past `cap` elements the result
/// degrades to identity plus generators, flagged incomplete.
SymmetrySet lsd(const MultiContextSystem& m, int k, GapMode mode = GapMode::shared,
                std::size_t cap = default_message_cap);

/// Line-delimited inspection format.
struct DsdRequest {
    int target = 0;
    std::set<int> history;
};

struct DsdReply {
    PermSet perms;
    bool complete = true;
};

std::string serialize(const DsdRequest& r);
DsdRequest parse_request(const std::string& line);
/// `PERMSET <count>[ incomplete]`, then one cycle line per permutation
/// with qualified atoms; the identity is written "()".
std::string serialize(const DsdReply& r);
DsdReply parse_reply(const std::string& text, const AtomSet& domain);

struct DetectionOptions {
    GapMode mode = GapMode::shared;
    std::size_t message_cap = default_message_cap;
    bool parallel = true;
    /// Requests above this many in flight run inline in the caller.
    std::size_t max_in_flight = 64;
    /// 0 keeps the ascending neighbour order; otherwise shuffled per request.
    std::uint64_t neighbour_shuffle_seed = 0;
    /// Zero means wait indefinitely.
    std::chrono::milliseconds timeout{0};
    bool record_wire = false;
};

/// One node per context answering DSD requests; every node computes its
/// LSD at most once and keeps it for later requests.
class DetectionService {
public:
    explicit DetectionService(const MultiContextSystem& m, DetectionOptions opts = {});
    DetectionService(const DetectionService&) = delete;
    DetectionService& operator=(const DetectionService&) = delete;
    ~DetectionService();

    /// Blocking client call.
    SymmetrySet dsd(int k, const std::set<int>& history = {});
    std::future<DsdReply> request(int k, std::set<int> history);

    /// The node's cached LSD (computed on first use).
    const SymmetrySet& local(int k);

    std::size_t lsd_computations(int k) const;
    std::size_t lsd_computations() const;
    std::vector<std::string> wire_log() const;
    std::vector<std::string> warnings() const;
    const MultiContextSystem& system() const { return m_; }

private:
    struct Node {
        std::once_flag init;
        SymmetrySet cache;
        std::atomic<std::size_t> computations{0};
    };

    DsdReply handle(int k, std::set<int> history);
    DsdReply await(int target, std::future<DsdReply>& f);
    PermSet capped_join(const PermSet& left, const PermSet& right, bool& complete);
    void log(const std::string& text);
    void warn(const std::string& text);

    const MultiContextSystem& m_;
    DetectionOptions opts_;
    std::vector<std::unique_ptr<Node>> nodes_;
    std::atomic<std::size_t> in_flight_{0};
    mutable std::mutex log_mutex_;
    std::vector<std::string> wire_;
    std::vector<std::string> warnings_;
};

std::unique_ptr<DetectionService> run_detection_service(const MultiContextSystem& m, DetectionOptions opts = {});

/// dsd(k, ∅) on a fresh service.
SymmetrySet detect_partial_symmetries(const MultiContextSystem& m, int k, DetectionOptions opts = {});

}  // namespace mcsym
