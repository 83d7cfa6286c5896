#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "ngnlab/errors.hpp"
#include "ngnlab/image.hpp"

namespace ngnlab {

namespace detail {

// fftw plan creation/destruction is not thread-safe; execution of distinct
// plans on their own buffers is.
inline std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

struct FftwReal2d {
    int w = 0, h = 0;
    double* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;

    FftwReal2d(int width, int height) : w(width), h(height) {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        in = fftw_alloc_real(static_cast<std::size_t>(w) * h);
        out = fftw_alloc_complex(static_cast<std::size_t>(h) * (w / 2 + 1));
        forward = fftw_plan_dft_r2c_2d(h, w, in, out, FFTW_ESTIMATE);
        inverse = fftw_plan_dft_c2r_2d(h, w, out, in, FFTW_ESTIMATE);
    }
    FftwReal2d(const FftwReal2d&) = delete;
    FftwReal2d& operator=(const FftwReal2d&) = delete;
    ~FftwReal2d() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(inverse);
        fftw_free(in);
        fftw_free(out);
    }
    std::size_t spectrum_size() const { return static_cast<std::size_t>(h) * (w / 2 + 1); }
};

}  // namespace detail

// Zero-mean real Gabor kernel bank. Filters are applied by circular FFT
// convolution of the reflect-padded image, equivalent to direct convolution
// with reflect boundary handling on the cropped interior. The cosine-phase
// kernel is point-symmetric, so convolution and correlation coincide.
class GaborBank {
public:
    explicit GaborBank(int scales = 4, int orientations = 6)
        : scales_(scales), orientations_(orientations) {
        if (scales < 1 || orientations < 1) throw ConfigError("bad gabor bank shape");
        for (int s = 0; s < scales; ++s) {
            const double wavelength = 4.0 * std::pow(2.0, s);
            const double sigma = 0.56 * wavelength;
            const int half = static_cast<int>(std::ceil(3.0 * sigma));
            for (int o = 0; o < orientations; ++o) {
                const double theta = static_cast<double>(o) * M_PI / orientations;
                kernels_.push_back(make_kernel(wavelength, sigma, half, theta));
            }
        }
        cache_.resize(kernels_.size());
    }

    int scales() const { return scales_; }
    int orientations() const { return orientations_; }
    double wavelength_of_scale(int s) const { return 4.0 * std::pow(2.0, s); }
    std::size_t feature_length() const { return 2u * kernels_.size(); }

    // (mean |response|, std |response|) per filter, filters ordered scale-major.
    std::vector<double> extract(const GrayImage& img) const {
        if (img.data.empty()) throw EmptyDataError("empty image");
        std::vector<double> features;
        features.reserve(feature_length());
        const double n = static_cast<double>(img.data.size());

        std::unique_ptr<detail::FftwReal2d> fft;
        std::vector<std::complex<double>> image_spectrum;
        int last_half = -1;

        for (std::size_t ki = 0; ki < kernels_.size(); ++ki) {
            const Kernel& k = kernels_[ki];
            const int pad_w = img.width + 2 * k.half;
            const int pad_h = img.height + 2 * k.half;
            if (k.half != last_half) {
                last_half = k.half;
                fft = std::make_unique<detail::FftwReal2d>(pad_w, pad_h);
                fill_reflect_padded(img, k.half, fft->in, pad_w, pad_h);
                fftw_execute(fft->forward);
                image_spectrum.assign(
                    reinterpret_cast<std::complex<double>*>(fft->out),
                    reinterpret_cast<std::complex<double>*>(fft->out) + fft->spectrum_size());
            }
            const std::vector<std::complex<double>> kspec = kernel_spectrum(ki, pad_w, pad_h);

            auto* spec = reinterpret_cast<std::complex<double>*>(fft->out);
            for (std::size_t i = 0; i < fft->spectrum_size(); ++i)
                spec[i] = image_spectrum[i] * kspec[i];
            fftw_execute(fft->inverse);

            const double scale = 1.0 / (static_cast<double>(pad_w) * pad_h);
            double sum = 0.0, sum2 = 0.0;
            for (int y = 0; y < img.height; ++y) {
                const double* row =
                    fft->in + static_cast<std::size_t>(y + k.half) * pad_w + k.half;
                for (int x = 0; x < img.width; ++x) {
                    const double r = std::abs(row[x] * scale);
                    sum += r;
                    sum2 += r * r;
                }
            }
            const double mean = sum / n;
            const double var = std::max(0.0, sum2 / n - mean * mean);
            features.push_back(mean);
            features.push_back(std::sqrt(var));
        }
        return features;
    }

private:
    struct Kernel {
        int half = 0;
        std::vector<double> taps;  // (2*half+1)^2, zero mean
    };

    struct CacheEntry {
        int pad_w = -1, pad_h = -1;
        std::vector<std::complex<double>> spectrum;
    };

    static Kernel make_kernel(double wavelength, double sigma, int half, double theta) {
        Kernel k;
        k.half = half;
        const int size = 2 * half + 1;
        k.taps.resize(static_cast<std::size_t>(size) * size);
        const double aspect = 0.5;  // envelope elongated along the stripe axis
        const double cos_t = std::cos(theta), sin_t = std::sin(theta);
        double sum = 0.0;
        for (int y = -half; y <= half; ++y) {
            for (int x = -half; x <= half; ++x) {
                const double xr = x * cos_t + y * sin_t;
                const double yr = -x * sin_t + y * cos_t;
                const double env =
                    std::exp(-(xr * xr + aspect * aspect * yr * yr) / (2.0 * sigma * sigma));
                const double v = env * std::cos(2.0 * M_PI * xr / wavelength);
                k.taps[static_cast<std::size_t>(y + half) * size + (x + half)] = v;
                sum += v;
            }
        }
        const double mean = sum / static_cast<double>(k.taps.size());
        for (double& v : k.taps) v -= mean;
        return k;
    }

    static void fill_reflect_padded(const GrayImage& img, int half, double* dst, int pad_w,
                                    int pad_h) {
        auto reflect = [](int i, int n) {
            while (i < 0 || i >= n) {
                if (i < 0) i = -i - 1;
                if (i >= n) i = 2 * n - i - 1;
            }
            return i;
        };
        for (int y = 0; y < pad_h; ++y) {
            const int sy = reflect(y - half, img.height);
            for (int x = 0; x < pad_w; ++x) {
                const int sx = reflect(x - half, img.width);
                dst[static_cast<std::size_t>(y) * pad_w + x] = img.at(sx, sy) / 255.0;
            }
        }
    }

    // Kernel taps are embedded wrapped around the origin so the convolution
    // output stays aligned with the padded image. Spectra are cached per
    // kernel for the last padded size seen; returned by value so a concurrent
    // extract at a different image size cannot invalidate the view.
    std::vector<std::complex<double>> kernel_spectrum(std::size_t ki, int pad_w,
                                                      int pad_h) const {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        CacheEntry& entry = cache_[ki];
        if (entry.pad_w == pad_w && entry.pad_h == pad_h) return entry.spectrum;

        const Kernel& k = kernels_[ki];
        detail::FftwReal2d tmp(pad_w, pad_h);
        std::fill(tmp.in, tmp.in + static_cast<std::size_t>(pad_w) * pad_h, 0.0);
        const int size = 2 * k.half + 1;
        for (int y = 0; y < size; ++y) {
            for (int x = 0; x < size; ++x) {
                const int py = (y - k.half + pad_h) % pad_h;
                const int px = (x - k.half + pad_w) % pad_w;
                tmp.in[static_cast<std::size_t>(py) * pad_w + px] =
                    k.taps[static_cast<std::size_t>(y) * size + x];
            }
        }
        fftw_execute(tmp.forward);
        entry.pad_w = pad_w;
        entry.pad_h = pad_h;
        entry.spectrum.assign(
            reinterpret_cast<std::complex<double>*>(tmp.out),
            reinterpret_cast<std::complex<double>*>(tmp.out) + tmp.spectrum_size());
        return entry.spectrum;
    }

    int scales_;
    int orientations_;
    std::vector<Kernel> kernels_;
    mutable std::vector<CacheEntry> cache_;
    mutable std::mutex cache_mutex_;
};

inline std::vector<double> extract_gabor(const GrayImage& img, int scales = 4,
                                         int orientations = 6) {
    return GaborBank(scales, orientations).extract(img);
}

}  // namespace ngnlab
