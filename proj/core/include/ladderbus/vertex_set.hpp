#ifndef LADDERBUS_VERTEX_SET_HPP
#define LADDERBUS_VERTEX_SET_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ladderbus
{

/// Fixed-capacity bitset over vertex ids 0..capacity-1.
class VertexSet
{
public:
    VertexSet() = default;
    explicit VertexSet(std::size_t capacity)
        : capacity_(capacity), words_((capacity + 63) / 64, 0)
    {
    }

    static VertexSet full(std::size_t capacity)
    {
        VertexSet s(capacity);
        for (std::size_t i = 0; i < capacity; ++i)
        {
            s.insert(i);
        }
        return s;
    }

    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }

    void insert(std::size_t v) { words_[v >> 6U] |= bit(v); }
    void erase(std::size_t v) { words_[v >> 6U] &= ~bit(v); }
    [[nodiscard]] bool contains(std::size_t v) const
    {
        return (words_[v >> 6U] & bit(v)) != 0;
    }

    [[nodiscard]] std::size_t count() const
    {
        std::size_t n = 0;
        for (auto w : words_)
        {
            n += static_cast<std::size_t>(std::popcount(w));
        }
        return n;
    }

    [[nodiscard]] bool empty() const
    {
        for (auto w : words_)
        {
            if (w != 0)
            {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] bool intersects(const VertexSet &other) const
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
        {
            if ((words_[i] & other.words_[i]) != 0)
            {
                return true;
            }
        }
        return false;
    }

    VertexSet &operator&=(const VertexSet &other)
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
        {
            words_[i] &= other.words_[i];
        }
        return *this;
    }

    VertexSet &operator-=(const VertexSet &other)
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
        {
            words_[i] &= ~other.words_[i];
        }
        return *this;
    }

    friend VertexSet operator&(VertexSet a, const VertexSet &b) { return a &= b; }

    /// Remove every element <= v.
    void erase_up_to(std::size_t v)
    {
        const std::size_t word = v >> 6U;
        for (std::size_t i = 0; i < word; ++i)
        {
            words_[i] = 0;
        }
        const std::size_t shift = (v & 63U) + 1;
        words_[word] = shift == 64 ? 0 : (words_[word] & (~std::uint64_t{0} << shift));
    }

    /// Calls f(v) for every member in ascending order.
    template <typename F> void for_each(F &&f) const
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
        {
            std::uint64_t w = words_[i];
            while (w != 0)
            {
                const auto b = static_cast<std::size_t>(std::countr_zero(w));
                f(i * 64 + b);
                w &= w - 1;
            }
        }
    }

    [[nodiscard]] std::vector<std::size_t> to_vector() const
    {
        std::vector<std::size_t> out;
        out.reserve(count());
        for_each([&](std::size_t v) { out.push_back(v); });
        return out;
    }

    friend bool operator==(const VertexSet &, const VertexSet &) = default;

private:
    static constexpr std::uint64_t bit(std::size_t v) { return std::uint64_t{1} << (v & 63U); }

    std::size_t capacity_{0};
    std::vector<std::uint64_t> words_;
};

} // namespace ladderbus

#endif // LADDERBUS_VERTEX_SET_HPP
