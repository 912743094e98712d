#pragma once

#include <cstddef>
#include <cstdlib>
#include <new>
#include <vector>

#include <sys/mman.h>

namespace mosum {

// Allocator for big per-index arrays. Blocks of 4 MiB or more are 2 MiB
// aligned and marked for transparent huge pages, which cuts first-touch
// page faults by a factor of 512 on large series. Smaller blocks go
// through operator new.
template <class T>
struct LargePageAllocator {
    using value_type = T;

    static constexpr std::size_t kHugePage = std::size_t{1} << 21;
    static constexpr std::size_t kThreshold = std::size_t{1} << 22;

    LargePageAllocator() noexcept = default;
    template <class U>
    LargePageAllocator(const LargePageAllocator<U>&) noexcept {}

    T* allocate(std::size_t count) {
        const std::size_t bytes = count * sizeof(T);
        if (bytes < kThreshold) {
            return static_cast<T*>(::operator new(bytes));
        }
        const std::size_t rounded = (bytes + kHugePage - 1) / kHugePage * kHugePage;
        void* p = std::aligned_alloc(kHugePage, rounded);
        if (p == nullptr) {
            throw std::bad_alloc();
        }
#ifdef MADV_HUGEPAGE
        madvise(p, rounded, MADV_HUGEPAGE);
#endif
        return static_cast<T*>(p);
    }

    void deallocate(T* p, std::size_t count) noexcept {
        if (count * sizeof(T) < kThreshold) {
            ::operator delete(p);
        } else {
            std::free(p);
        }
    }

    template <class U>
    bool operator==(const LargePageAllocator<U>&) const noexcept {
        return true;
    }
};

template <class T>
using large_vector = std::vector<T, LargePageAllocator<T>>;

} // namespace mosum
