// Calibration subject: keeps one core busy for a fixed fraction of each period.
// usage: smellwatt-duty-cycle DUTY PERIOD_MS SECONDS
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <thread>

int main(int argc, char** argv) {
    if (argc != 4) {
        std::cerr << "usage: " << argv[0] << " DUTY PERIOD_MS SECONDS\n";
        return 2;
    }
    using Clock = std::chrono::steady_clock;
    const double duty = std::atof(argv[1]);
    const auto period = std::chrono::milliseconds(std::atoi(argv[2]));
    const auto busy = std::chrono::duration_cast<Clock::duration>(period * duty);
    const auto end = Clock::now() + std::chrono::duration<double>(std::atof(argv[3]));

    volatile unsigned long sink = 0;
    for (auto start = Clock::now(); start < end; start += period) {
        while (Clock::now() < start + busy) sink = sink + 1;
        std::this_thread::sleep_until(start + period);
    }
    return 0;
}
