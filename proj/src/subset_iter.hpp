#ifndef GMMCSP_SUBSET_ITER_HPP
#define GMMCSP_SUBSET_ITER_HPP

#include <span>
#include <vector>

namespace gmmcsp::detail {

/// Calls fn(span) for every sorted index subset of {1..n} with size
/// 1..max_size, sizes ascending, subsets in lexicographic order.
template <typename Fn>
void for_each_index_set(int n, int max_size, Fn && fn)
{
    std::vector<int> set;
    for (int size = 1; size <= max_size && size <= n; ++size) {
        set.resize(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i)
            set[static_cast<std::size_t>(i)] = i + 1;
        while (true) {
            fn(std::span<const int>(set));
            int pos = size - 1;
            while (pos >= 0 && set[static_cast<std::size_t>(pos)] == n - (size - 1 - pos))
                --pos;
            if (pos < 0)
                break;
            ++set[static_cast<std::size_t>(pos)];
            for (int j = pos + 1; j < size; ++j)
                set[static_cast<std::size_t>(j)] = set[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

/// Same, but subsets are drawn from an arbitrary sorted base list.
template <typename Fn>
void for_each_subset_of(std::span<const int> base, int max_size, Fn && fn)
{
    const int n = static_cast<int>(base.size());
    std::vector<int> subset;
    std::vector<int> pick;
    for (int size = 1; size <= max_size && size <= n; ++size) {
        pick.resize(static_cast<std::size_t>(size));
        subset.resize(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i)
            pick[static_cast<std::size_t>(i)] = i;
        while (true) {
            for (int i = 0; i < size; ++i)
                subset[static_cast<std::size_t>(i)] = base[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
            fn(std::span<const int>(subset));
            int pos = size - 1;
            while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == n - (size - pos))
                --pos;
            if (pos < 0)
                break;
            ++pick[static_cast<std::size_t>(pos)];
            for (int j = pos + 1; j < size; ++j)
                pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

/// Odometer over value tuples of the given width in {0..q-1}, lexicographic.
template <typename Fn>
void for_each_value_tuple(int width, int q, Fn && fn)
{
    std::vector<std::uint8_t> values(static_cast<std::size_t>(width), 0);
    while (true) {
        fn(std::span<const std::uint8_t>(values));
        int pos = width - 1;
        while (pos >= 0 && values[static_cast<std::size_t>(pos)] == q - 1) {
            values[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0)
            break;
        ++values[static_cast<std::size_t>(pos)];
    }
}

} // namespace gmmcsp::detail

#endif
