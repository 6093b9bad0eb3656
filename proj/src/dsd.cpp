// The DSD protocol: one node per context, requests carry the history.

#include <algorithm>
#include <random>
#include <sstream>

#include "mcsym/detect.hpp"
#include "mcsym/error.hpp"

namespace mcsym {

std::string serialize(const DsdRequest& r) {
    std::string out = "DSD " + std::to_string(r.target) + " H=";
    bool first = true;
    for (int h : r.history) {
        if (!first) out += ',';
        first = false;
        out += std::to_string(h);
    }
    return out;
}

DsdRequest parse_request(const std::string& line) {
    std::istringstream in(line);
    std::string tag, hist;
    DsdRequest r;
    if (!(in >> tag >> r.target >> hist) || tag != "DSD" || hist.rfind("H=", 0) != 0)
        throw ParseError("malformed DSD request", 1, 1);
    std::istringstream items(hist.substr(2));
    for (std::string item; std::getline(items, item, ',');) {
        if (item.empty()) continue;
        try {
            r.history.insert(std::stoi(item));
        } catch (const std::exception&) {
            throw ParseError("malformed history entry '" + item + "'", 1, 1);
        }
    }
    return r;
}

std::string serialize(const DsdReply& r) {
    std::string out = "PERMSET " + std::to_string(r.perms.size());
    if (!r.complete) out += " incomplete";
    out += '\n';
    for (const auto& p : r.perms) {
        auto cyc = emit_cycles(p, AtomStyle::qualified);
        out += (cyc.empty() ? "()" : cyc) + '\n';
    }
    return out;
}

DsdReply parse_reply(const std::string& text, const AtomSet& domain) {
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    std::istringstream h(header);
    std::string tag, flag;
    std::size_t count = 0;
    if (!(h >> tag >> count) || tag != "PERMSET") throw ParseError("malformed PERMSET header", 1, 1);
    DsdReply r;
    if (h >> flag) {
        if (flag != "incomplete") throw ParseError("unknown PERMSET flag '" + flag + "'", 1, 1);
        r.complete = false;
    }
    std::string line;
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line)) throw ParseError("PERMSET truncated", static_cast<int>(i) + 2, 1);
        r.perms.insert(parse_cycles(line, domain).extended(domain));
    }
    return r;
}

DetectionService::DetectionService(const MultiContextSystem& m, DetectionOptions opts) : m_(m), opts_(opts) {
    for (int k = 1; k <= m.size(); ++k) nodes_.push_back(std::make_unique<Node>());
}

DetectionService::~DetectionService() = default;

const SymmetrySet& DetectionService::local(int k) {
    if (k < 1 || k > m_.size()) throw std::out_of_range("no context " + std::to_string(k));
    Node& node = *nodes_[static_cast<std::size_t>(k - 1)];
    std::call_once(node.init, [&] {
        node.computations.fetch_add(1);
        node.cache = lsd(m_, k, opts_.mode, opts_.message_cap);
        if (!node.cache.complete)
            warn("context " + std::to_string(k) + ": local group exceeds " + std::to_string(opts_.message_cap) +
                 " elements, keeping generators only");
    });
    return node.cache;
}

std::future<DsdReply> DetectionService::request(int k, std::set<int> history) {
    if (k < 1 || k > m_.size()) throw std::out_of_range("no context " + std::to_string(k));
    if (opts_.record_wire) log(serialize(DsdRequest{k, history}));
    bool spawn = opts_.parallel && in_flight_.fetch_add(1) < opts_.max_in_flight;
    if (opts_.parallel && !spawn) in_flight_.fetch_sub(1);
    auto policy = spawn ? std::launch::async : std::launch::deferred;
    return std::async(policy, [this, k, spawn, history = std::move(history)]() mutable {
        struct Release {
            std::atomic<std::size_t>& counter;
            bool active;
            ~Release() {
                if (active) counter.fetch_sub(1);
            }
        } release{in_flight_, spawn};
        DsdReply reply = handle(k, std::move(history));
        if (opts_.record_wire) log(serialize(reply));
        return reply;
    });
}

DsdReply DetectionService::await(int target, std::future<DsdReply>& f) {
    if (opts_.timeout.count() > 0 && f.wait_for(opts_.timeout) == std::future_status::timeout)
        throw std::runtime_error("node " + std::to_string(target) + " unreachable");
    return f.get();
}

DsdReply DetectionService::handle(int k, std::set<int> history) {
    const SymmetrySet& cache = local(k);
    history.insert(k);
    DsdReply out{cache.perms, cache.complete};

    std::vector<int> next;
    for (int i : import_neighbourhood(m_, k))
        if (!history.count(i)) next.push_back(i);
    if (opts_.neighbour_shuffle_seed != 0) {
        std::mt19937_64 rng(opts_.neighbour_shuffle_seed ^ (static_cast<std::uint64_t>(k) << 32) ^ history.size());
        std::shuffle(next.begin(), next.end(), rng);
    }

    std::vector<std::future<DsdReply>> pending;
    for (int i : next) pending.push_back(request(i, history));
    std::exception_ptr failure;
    for (std::size_t j = 0; j < pending.size(); ++j) {
        try {
            DsdReply sub = await(next[j], pending[j]);
            bool complete = out.complete && sub.complete;
            out.perms = capped_join(out.perms, sub.perms, complete);
            out.complete = complete;
        } catch (...) {
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

PermSet DetectionService::capped_join(const PermSet& left, const PermSet& right, bool& complete) {
    PermSet out;
    bool overflow = false;
    for (const auto& p : left) {
        for (const auto& s : right)
            if (auto j = join(p, s)) {
                out.insert(std::move(*j));
                if (out.size() > opts_.message_cap) {
                    overflow = true;
                    break;
                }
            }
        if (overflow) break;
    }
    if (!overflow) return out;
    // Keep only joins with an identity on one side: still partial symmetries.
    warn("join exceeds " + std::to_string(opts_.message_cap) + " permutations, result is incomplete");
    complete = false;
    out.clear();
    for (const auto& p : left)
        for (const auto& s : right)
            if (p.is_identity() || s.is_identity())
                if (auto j = join(p, s)) out.insert(std::move(*j));
    return out;
}

SymmetrySet DetectionService::dsd(int k, const std::set<int>& history) {
    auto f = request(k, history);
    DsdReply r = await(k, f);
    SymmetrySet out;
    out.perms = std::move(r.perms);
    out.complete = r.complete;
    return out;
}

std::size_t DetectionService::lsd_computations(int k) const {
    return nodes_.at(static_cast<std::size_t>(k - 1))->computations.load();
}

std::size_t DetectionService::lsd_computations() const {
    std::size_t total = 0;
    for (const auto& n : nodes_) total += n->computations.load();
    return total;
}

void DetectionService::log(const std::string& text) {
    std::lock_guard lock(log_mutex_);
    wire_.push_back(text);
}

void DetectionService::warn(const std::string& text) {
    std::lock_guard lock(log_mutex_);
    warnings_.push_back(text);
}

std::vector<std::string> DetectionService::wire_log() const {
    std::lock_guard lock(log_mutex_);
    return wire_;
}

std::vector<std::string> DetectionService::warnings() const {
    std::lock_guard lock(log_mutex_);
    return warnings_;
}

std::unique_ptr<DetectionService> run_detection_service(const MultiContextSystem& m, DetectionOptions opts) {
    return std::make_unique<DetectionService>(m, opts);
}

SymmetrySet detect_partial_symmetries(const MultiContextSystem& m, int k, DetectionOptions opts) {
    DetectionService service(m, opts);
    return service.dsd(k);
}

}  // namespace mcsym
