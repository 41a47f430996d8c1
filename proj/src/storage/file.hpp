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

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <string>
#include <utility>

#include "alphamine/error.hpp"
#include "alphamine/storage/codec.hpp"

namespace alphamine::storage {

/// Owning POSIX file descriptor with positional I/O.
class File {
public:
    File() = default;
    File(const std::filesystem::path& path, int flags) : path_(path) {
        fd_ = ::open(path.c_str(), flags | O_CLOEXEC, 0644);
        if (fd_ < 0) fail("open");
    }
    File(const File&) = delete;
    File& operator=(const File&) = delete;
    File(File&& other) noexcept : fd_(std::exchange(other.fd_, -1)), path_(std::move(other.path_)) {}
    File& operator=(File&& other) noexcept {
        if (this != &other) {
            close();
            fd_ = std::exchange(other.fd_, -1);
            path_ = std::move(other.path_);
        }
        return *this;
    }
    ~File() { close(); }

    static File create(const std::filesystem::path& path) { return File(path, O_RDWR | O_CREAT | O_TRUNC); }
    static File open_rw(const std::filesystem::path& path) { return File(path, O_RDWR | O_CREAT); }
    static File open_read(const std::filesystem::path& path) { return File(path, O_RDONLY); }

    bool is_open() const noexcept { return fd_ >= 0; }

    void close() noexcept {
        if (fd_ >= 0) ::close(fd_);
        fd_ = -1;
    }

    void pwrite_all(ByteView data, std::uint64_t offset) {
        std::size_t done = 0;
        while (done < data.size()) {
            ssize_t n = ::pwrite(fd_, data.data() + done, data.size() - done, static_cast<off_t>(offset + done));
            if (n < 0) {
                if (errno == EINTR) continue;
                fail("pwrite");
            }
            done += static_cast<std::size_t>(n);
        }
    }

    void append(ByteView data) { pwrite_all(data, size()); }

    /// Reads up to `len` bytes; fewer only at end of file.
    Bytes pread_some(std::uint64_t offset, std::size_t len) const {
        Bytes out(len);
        std::size_t done = 0;
        while (done < len) {
            ssize_t n = ::pread(fd_, out.data() + done, len - done, static_cast<off_t>(offset + done));
            if (n < 0) {
                if (errno == EINTR) continue;
                fail("pread");
            }
            if (n == 0) break;
            done += static_cast<std::size_t>(n);
        }
        out.resize(done);
        return out;
    }

    Bytes read_all() const { return pread_some(0, static_cast<std::size_t>(size())); }

    std::uint64_t size() const {
        struct stat st {};
        if (::fstat(fd_, &st) != 0) fail("fstat");
        return static_cast<std::uint64_t>(st.st_size);
    }

    void truncate(std::uint64_t len) {
        if (::ftruncate(fd_, static_cast<off_t>(len)) != 0) fail("ftruncate");
    }

    void sync() {
        if (::fdatasync(fd_) != 0) fail("fdatasync");
    }

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    [[noreturn]] void fail(const char* op) const {
        throw Error(Errc::io, std::string(op) + " '" + path_.string() + "': " + std::strerror(errno));
    }

    int fd_ = -1;
    std::filesystem::path path_;
};

/// Writes a whole file and makes it durable.
inline void write_file_durable(const std::filesystem::path& path, ByteView data) {
    File f = File::create(path);
    f.pwrite_all(data, 0);
    f.sync();
}

} // namespace alphamine::storage
