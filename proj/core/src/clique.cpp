#include "ladderbus/clique.hpp"

#include <algorithm>

#include "ladderbus/error.hpp"

namespace ladderbus
{

namespace
{

using Clock = std::chrono::steady_clock;

std::vector<std::size_t> greedy_clique(const ConflictGraph &g, VertexSet pool)
{
    std::vector<std::size_t> clique;
    while (!pool.empty())
    {
        std::size_t pick = 0;
        std::size_t pick_deg = 0;
        bool first = true;
        pool.for_each([&](std::size_t v) {
            const std::size_t d = (g.neighbors(v) & pool).count();
            if (first || d > pick_deg)
            {
                pick = v;
                pick_deg = d;
                first = false;
            }
        });
        clique.push_back(pick);
        pool &= g.neighbors(pick);
    }
    std::sort(clique.begin(), clique.end());
    return clique;
}

class LexSearch
{
public:
    LexSearch(const ConflictGraph &g, Clock::time_point deadline) : g_(g), deadline_(deadline) {}

    void seed(std::vector<std::size_t> clique)
    {
        best_ = std::move(clique);
        // A clique of the seed's own size may still be lexicographically smaller.
        threshold_ = best_.size() - 1;
    }

    void expand(const VertexSet &candidates)
    {
        ++nodes_;
        if ((nodes_ & 255U) == 0 && Clock::now() > deadline_)
        {
            timed_out_ = true;
        }
        if (timed_out_)
        {
            return;
        }
        if (current_.size() > threshold_)
        {
            best_ = current_;
            threshold_ = current_.size();
        }
        if (candidates.empty())
        {
            return;
        }

        const std::vector<std::size_t> verts = candidates.to_vector();
        std::vector<std::size_t> suffix_colours(verts.size());
        std::vector<VertexSet> classes;
        for (std::size_t i = verts.size(); i-- > 0;)
        {
            const auto &nb = g_.neighbors(verts[i]);
            auto it = std::find_if(classes.begin(), classes.end(),
                                   [&](const VertexSet &cls) { return !cls.intersects(nb); });
            if (it == classes.end())
            {
                classes.emplace_back(g_.vertex_count());
                it = classes.end() - 1;
            }
            it->insert(verts[i]);
            suffix_colours[i] = classes.size();
        }

        for (std::size_t i = 0; i < verts.size(); ++i)
        {
            if (current_.size() + suffix_colours[i] <= threshold_)
            {
                break;
            }
            const std::size_t v = verts[i];
            VertexSet next = candidates & g_.neighbors(v);
            next.erase_up_to(v);
            current_.push_back(v);
            expand(next);
            current_.pop_back();
            if (timed_out_)
            {
                return;
            }
        }
    }

    [[nodiscard]] std::vector<std::size_t> best() const { return best_; }
    [[nodiscard]] bool timed_out() const { return timed_out_; }
    [[nodiscard]] std::uint64_t nodes() const { return nodes_; }

private:
    const ConflictGraph &g_;
    Clock::time_point deadline_;
    std::vector<std::size_t> current_;
    std::vector<std::size_t> best_;
    std::size_t threshold_{0};
    std::uint64_t nodes_{0};
    bool timed_out_{false};
};

} // namespace

CliqueResult max_clique(const ConflictGraph &g, const VertexSet &candidates, const CliqueOptions &options)
{
    if (candidates.empty())
    {
        throw ConfigError("max_clique: empty graph");
    }
    LexSearch search(g, Clock::now() + options.budget);
    search.seed(greedy_clique(g, candidates));
    search.expand(candidates);
    return {search.best(), !search.timed_out(), search.nodes()};
}

CliqueResult max_clique(const ConflictGraph &g, const CliqueOptions &options)
{
    return max_clique(g, VertexSet::full(g.vertex_count()), options);
}

std::vector<std::size_t> degeneracy_order(const ConflictGraph &g, const VertexSet &candidates)
{
    // Bucket queue keyed by remaining degree.
    const std::size_t n = g.vertex_count();
    std::vector<std::size_t> deg(n, 0);
    std::size_t max_deg = 0;
    candidates.for_each([&](std::size_t v) {
        deg[v] = (g.neighbors(v) & candidates).count();
        max_deg = std::max(max_deg, deg[v]);
    });
    std::vector<std::vector<std::size_t>> buckets(max_deg + 1);
    candidates.for_each([&](std::size_t v) { buckets[deg[v]].push_back(v); });
    VertexSet removed(n);
    std::vector<std::size_t> order;
    const std::size_t total = candidates.count();
    order.reserve(total);
    std::size_t d = 0;
    while (order.size() < total)
    {
        d = std::min(d, max_deg);
        while (buckets[d].empty())
        {
            ++d;
        }
        const std::size_t v = buckets[d].back();
        buckets[d].pop_back();
        if (removed.contains(v) || deg[v] != d)
        {
            continue; // stale entry
        }
        removed.insert(v);
        order.push_back(v);
        (g.neighbors(v) & candidates).for_each([&](std::size_t u) {
            if (!removed.contains(u))
            {
                --deg[u];
                buckets[deg[u]].push_back(u);
            }
        });
        d = d == 0 ? 0 : d - 1;
    }
    return order;
}

namespace
{

void bron_kerbosch(const ConflictGraph &g, std::vector<std::size_t> &r, VertexSet p, VertexSet x,
                   const std::function<void(const std::vector<std::size_t> &)> &visit)
{
    if (p.empty())
    {
        if (x.empty())
        {
            auto sorted = r;
            std::sort(sorted.begin(), sorted.end());
            visit(sorted);
        }
        return;
    }
    // Tomita pivot: maximise |P ∩ N(u)| over u in P ∪ X.
    std::size_t pivot = 0;
    std::size_t best = 0;
    bool have = false;
    auto consider = [&](std::size_t u) {
        const std::size_t c = (p & g.neighbors(u)).count();
        if (!have || c > best)
        {
            pivot = u;
            best = c;
            have = true;
        }
    };
    p.for_each(consider);
    x.for_each(consider);

    VertexSet branch = p;
    branch -= g.neighbors(pivot);
    branch.for_each([&](std::size_t v) {
        r.push_back(v);
        bron_kerbosch(g, r, p & g.neighbors(v), x & g.neighbors(v), visit);
        r.pop_back();
        p.erase(v);
        x.insert(v);
    });
}

} // namespace

void for_each_maximal_clique(const ConflictGraph &g,
                             const std::function<void(const std::vector<std::size_t> &)> &visit)
{
    const std::size_t n = g.vertex_count();
    if (n == 0)
    {
        return;
    }
    const auto order = degeneracy_order(g, VertexSet::full(n));
    std::vector<std::size_t> position(n);
    for (std::size_t i = 0; i < order.size(); ++i)
    {
        position[order[i]] = i;
    }
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < order.size(); ++i)
    {
        const std::size_t v = order[i];
        VertexSet p(n);
        VertexSet x(n);
        g.neighbors(v).for_each([&](std::size_t u) {
            if (position[u] > i)
            {
                p.insert(u);
            }
            else
            {
                x.insert(u);
            }
        });
        r.assign(1, v);
        bron_kerbosch(g, r, p, x, visit);
    }
}

} // namespace ladderbus
