/************************************************************************
Copyright 2026 The alphamine Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
**************************************************************************/
#pragma once

#include <mutex>
#include <shared_mutex>

namespace alphamine::storage {

/// Shared mutex that does not let a stream of readers starve a writer.
/// A writer takes the gate first, so readers arriving after it queue behind
/// it instead of joining the current shared hold.
class TableLock {
public:
    void lock() {
        std::lock_guard gate(gate_);
        rw_.lock();
    }
    void unlock() { rw_.unlock(); }

    void lock_shared() {
        std::lock_guard gate(gate_);
        rw_.lock_shared();
    }
    void unlock_shared() { rw_.unlock_shared(); }

private:
    std::mutex gate_;
    std::shared_mutex rw_;
};

} // namespace alphamine::storage
