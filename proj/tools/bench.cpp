#include "bench.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nra::tools {

namespace {

using Clock = std::chrono::steady_clock;

struct Running {
  std::size_t job;
  pid_t pid;
  int fd;
  Clock::time_point start;
  std::string buffer;
};

struct Row {
  BenchOutcome outcome;
  double ms = 0;
};

std::string encode(const BenchOutcome& o) {
  std::ostringstream s;
  s << o.verdict << ' ' << o.conflicts << ' ' << o.decisions << ' ' << o.interpolant_clauses;
  return s.str();
}

BenchOutcome decode(const std::string& text) {
  BenchOutcome o;
  std::istringstream s(text);
  if (!(s >> o.verdict >> o.conflicts >> o.decisions >> o.interpolant_clauses)) o = BenchOutcome{"error"};
  return o;
}

Running spawn(const BenchJob& job, std::size_t index) {
  int fds[2];
  if (pipe(fds) != 0) throw std::runtime_error("pipe failed");
  std::fflush(nullptr);
  pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    close(fds[0]);
    std::string msg;
    try {
      msg = encode(job.run());
    } catch (const std::exception&) {
      msg = "error 0 0 0";
    }
    ssize_t ignored = write(fds[1], msg.data(), msg.size());
    (void)ignored;
    _exit(0);
  }
  close(fds[1]);
  return Running{index, pid, fds[0], Clock::now(), {}};
}

}  // namespace

void run_bench(const std::vector<BenchJob>& jobs, unsigned parallel, double timeout_s, std::ostream& csv) {
  if (parallel == 0) parallel = 1;
  std::vector<Row> rows(jobs.size());
  std::vector<Running> running;
  std::size_t next = 0;
  auto limit = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeout_s));

  auto finish = [&](std::size_t i, BenchOutcome outcome) {
    Running& r = running[i];
    rows[r.job].ms = std::chrono::duration<double, std::milli>(Clock::now() - r.start).count();
    rows[r.job].outcome = std::move(outcome);
    close(r.fd);
    int status = 0;
    waitpid(r.pid, &status, 0);
    running.erase(running.begin() + static_cast<std::ptrdiff_t>(i));
  };

  while (next < jobs.size() || !running.empty()) {
    while (next < jobs.size() && running.size() < parallel) {
      running.push_back(spawn(jobs[next], next));
      ++next;
    }
    std::vector<pollfd> fds;
    for (auto& r : running) fds.push_back(pollfd{r.fd, POLLIN, 0});
    int wait_ms = 200;
    poll(fds.data(), fds.size(), wait_ms);
    for (std::size_t i = running.size(); i-- > 0;) {
      Running& r = running[i];
      if (fds[i].revents & (POLLIN | POLLHUP)) {
        char buf[256];
        ssize_t n = read(r.fd, buf, sizeof buf);
        if (n > 0) {
          r.buffer.append(buf, static_cast<std::size_t>(n));
          continue;
        }
        finish(i, r.buffer.empty() ? BenchOutcome{"error"} : decode(r.buffer));
        continue;
      }
      if (timeout_s > 0 && Clock::now() - r.start > limit) {
        kill(r.pid, SIGKILL);
        finish(i, BenchOutcome{"timeout"});
      }
    }
  }

  csv << "file,kind,verdict,time_ms,conflicts,decisions,interpolant_clauses\n";
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& o = rows[i].outcome;
    csv << jobs[i].name << ',' << jobs[i].kind << ',' << o.verdict << ',' << std::fixed << std::setprecision(1)
        << rows[i].ms << ',' << o.conflicts << ',' << o.decisions << ',' << o.interpolant_clauses << '\n';
  }
}

}  // namespace nra::tools
