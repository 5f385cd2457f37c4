#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <future>
#include <mutex>
#include <unordered_map>
#include <utility>

namespace specinfer {

/// Thread-safe memo table with insert-or-get semantics: the producer for a
/// given key runs at most once, concurrent callers for the same key wait for
/// the first one. A producer that throws leaves the key absent so a later
/// call can retry.
template <typename Key, typename Value, typename Hash = std::hash<Key>>
class OnceCache {
public:
    template <typename Producer>
    Value get_or_compute(const Key& key, Producer&& produce)
    {
        std::promise<Value> promise;
        std::shared_future<Value> future;
        bool owner = false;
        {
            std::lock_guard lock(mutex_);
            auto it = entries_.find(key);
            if (it == entries_.end()) {
                future = promise.get_future().share();
                entries_.emplace(key, future);
                owner = true;
            } else {
                future = it->second;
            }
        }
        if (!owner) {
            hits_.fetch_add(1, std::memory_order_relaxed);
            return future.get();
        }
        misses_.fetch_add(1, std::memory_order_relaxed);
        try {
            promise.set_value(produce());
        } catch (...) {
            promise.set_exception(std::current_exception());
            std::lock_guard lock(mutex_);
            entries_.erase(key);
        }
        return future.get();
    }

    std::size_t size() const
    {
        std::lock_guard lock(mutex_);
        return entries_.size();
    }

    std::size_t hits() const { return hits_.load(std::memory_order_relaxed); }
    std::size_t misses() const { return misses_.load(std::memory_order_relaxed); }

    void clear()
    {
        std::lock_guard lock(mutex_);
        entries_.clear();
        hits_ = 0;
        misses_ = 0;
    }

private:
    mutable std::mutex mutex_;
    std::unordered_map<Key, std::shared_future<Value>, Hash> entries_;
    std::atomic<std::size_t> hits_{0};
    std::atomic<std::size_t> misses_{0};
};

// Hash for std::pair keys.
struct PairHash {
    template <typename A, typename B>
    std::size_t operator()(const std::pair<A, B>& p) const noexcept
    {
        std::size_t h = std::hash<A>{}(p.first);
        return h ^ (std::hash<B>{}(p.second) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
};

}  // namespace specinfer
