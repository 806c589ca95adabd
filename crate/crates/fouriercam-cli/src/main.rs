//! Command-line pipeline: synth -> encode -> decode ->
//! reconstruct / track / analyze, plus a `roundtrip` convenience command.
//!
//! Exit codes: 0 success, 2 usage error, 1 runtime error. Diagnostics go
//! to standard error; only reports go to standard output.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fouriercam::{analysis, io, synth, *};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fouriercam",
    about = "Simulate a camera that captures per-pixel temporal Fourier spectra in one coded exposure",
    arg_required_else_help = true,
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic scene video
    Synth(SynthArgs),
    /// Integrate a scene into a single coded exposure
    Encode(EncodeArgs),
    /// Recover the temporal spectrum from a coded exposure
    Decode(DecodeArgs),
    /// Inverse-transform a spectrum into video
    Reconstruct(ReconstructArgs),
    /// Detect moving pixels and recover their event times
    Track(TrackArgs),
    /// Print the closed-form capture comparisons
    Analyze(AnalyzeArgs),
    /// Encode, decode, reconstruct and report quality in one step
    Roundtrip(RoundtripArgs),
}

#[derive(Args)]
struct SynthArgs {
    #[command(subcommand)]
    scene: SceneCommand,
}

#[derive(Args)]
struct SceneCommon {
    #[arg(long, default_value_t = 64)]
    rows: usize,
    #[arg(long, default_value_t = 64)]
    cols: usize,
    #[arg(long, default_value_t = 64)]
    frames: usize,
    #[arg(long, default_value_t = 64.0)]
    fps: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum SceneCommand {
    /// Spinning disk of concentric rings with given angular period counts
    Disk {
        #[command(flatten)]
        common: SceneCommon,
        #[arg(long, default_value_t = 600.0)]
        rpm: f64,
        /// Comma-separated ring period counts, inner to outer
        #[arg(long, default_value = "3,5,7,11", value_delimiter = ',')]
        rings: Vec<u32>,
    },
    /// Bright spot moving along a parametric path
    Spot {
        #[command(flatten)]
        common: SceneCommon,
        #[arg(long, value_enum, default_value_t = PathKind::Heart)]
        path: PathKind,
        #[arg(long, default_value_t = 2.0)]
        radius: f64,
        /// Line start as row,col (line path only)
        #[arg(long, value_delimiter = ',', num_args = 2)]
        from: Option<Vec<f64>>,
        /// Line end as row,col (line path only)
        #[arg(long, value_delimiter = ',', num_args = 2)]
        to: Option<Vec<f64>>,
    },
    /// Text labels flashed one after another in quadrants
    Flash {
        #[command(flatten)]
        common: SceneCommon,
        /// Comma-separated labels built from T, H, U, E
        #[arg(long, default_value = "T,H,U,EE", value_delimiter = ',')]
        labels: Vec<String>,
        /// Seconds each label stays on screen
        #[arg(long, default_value_t = 0.25)]
        dwell: f64,
    },
    /// Sinusoidal fringe drifting across the frame
    Texture {
        #[command(flatten)]
        common: SceneCommon,
        /// Fringe spatial frequency in cycles per pixel
        #[arg(long, default_value_t = 0.05)]
        cycles: f64,
        /// Drift speed in pixels per second
        #[arg(long, default_value_t = 20.0)]
        speed: f64,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum PathKind {
    Heart,
    Circle,
    Line,
}

#[derive(Args)]
struct EncodeOptions {
    /// Exposure in seconds; defaults to the video duration
    #[arg(long)]
    exposure: Option<f64>,
    /// Kernel spec: compression:h=9 | periodic:f=91,harmonics=3,5,7,11 |
    /// background-subtract:h=8 | tracking
    #[arg(long, conflicts_with = "frequencies")]
    kernel: Option<String>,
    /// Explicit comma-separated frequency list (extraction kernel)
    #[arg(long, value_delimiter = ',')]
    frequencies: Option<Vec<f64>>,
    /// Coding elements per group as PxQ, e.g. 3x3
    #[arg(long)]
    ce: Option<String>,
    #[arg(long, value_enum, default_value_t = SpatialModeArg::Ideal)]
    spatial_mode: SpatialModeArg,
    /// Coding waveform quantization level count, or "off"
    #[arg(long, default_value = "off")]
    pwm_levels: String,
    /// Sensor noise: photon=<budget>,read=<sigma>,adc=<bits> (each part optional)
    #[arg(long)]
    noise: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Copy, Clone, ValueEnum)]
enum SpatialModeArg {
    Ideal,
    Block,
}

#[derive(Args)]
struct EncodeArgs {
    /// Input scene video (FCV1)
    #[arg(long)]
    video: PathBuf,
    #[command(flatten)]
    options: EncodeOptions,
    /// Output coded exposure (FCE1)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DecodeArgs {
    /// Input coded exposure (FCE1)
    #[arg(long)]
    input: PathBuf,
    /// Output spectrum (FCS1)
    #[arg(long)]
    out: PathBuf,
    /// Write per-coefficient amplitude maps to <prefix>_<k>.pgm
    #[arg(long)]
    amplitude_prefix: Option<PathBuf>,
    /// Write per-coefficient phase maps to <prefix>_<k>.pgm
    #[arg(long)]
    phase_prefix: Option<PathBuf>,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Input spectrum (FCS1)
    #[arg(long)]
    input: PathBuf,
    /// Output video (FCV1)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrackArgs {
    /// Input spectrum (FCS1) from a tracking capture
    #[arg(long)]
    input: PathBuf,
    /// Detection threshold relative to the peak amplitude
    #[arg(long, default_value_t = DEFAULT_DETECTION_THRESHOLD)]
    threshold: f64,
    /// Output CSV of detected pixels sorted by time
    #[arg(long)]
    csv: PathBuf,
    /// Optional recovered-time map (PPM)
    #[arg(long)]
    time_map: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Highest temporal frequency of the scene, Hz
    #[arg(long, default_value_t = 80.0)]
    fmax: f64,
    /// Number of acquired coefficients
    #[arg(long, default_value_t = 8)]
    coefficients: usize,
    /// Frame count of the equivalent frame-sequence capture
    #[arg(long, default_value_t = 100)]
    frames: u64,
    /// Pixels per frame
    #[arg(long, default_value_t = 1_166_400)]
    pixels: u64,
    #[arg(long, default_value_t = 1.0)]
    exposure: f64,
    /// Frame-rate gain of the impulse-shutter comparison
    #[arg(long, default_value_t = 16)]
    gain: usize,
    /// Coding device grayscale levels
    #[arg(long, default_value_t = 256)]
    grayscale_levels: u32,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Copy, Clone, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args)]
struct RoundtripArgs {
    /// Input scene video (FCV1)
    #[arg(long)]
    video: PathBuf,
    #[command(flatten)]
    options: EncodeOptions,
    /// Directory for coded.fce, spectrum.fcs, recon.fcv and report.txt
    #[arg(long)]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth(args) => run_synth(args),
        Command::Encode(args) => {
            let video = io::read_video_cube(&args.video)
                .with_context(|| format!("reading {}", args.video.display()))?;
            let coded = encode_from_options(&video, &args.options)?;
            io::write_coded_exposure(&args.out, &coded)
                .with_context(|| format!("writing {}", args.out.display()))?;
            Ok(())
        }
        Command::Decode(args) => run_decode(args),
        Command::Reconstruct(args) => {
            let spectrum = io::read_spectrum(&args.input)
                .with_context(|| format!("reading {}", args.input.display()))?;
            let video = reconstruct_video(&spectrum)?;
            io::write_video_cube(&args.out, &video)
                .with_context(|| format!("writing {}", args.out.display()))?;
            Ok(())
        }
        Command::Track(args) => run_track(args),
        Command::Analyze(args) => run_analyze(args),
        Command::Roundtrip(args) => run_roundtrip(args),
    }
}

fn run_synth(args: SynthArgs) -> Result<()> {
    let (cube, out) = match args.scene {
        SceneCommand::Disk { common, rpm, rings } => (
            synth::rotating_disk(
                rpm,
                &rings,
                common.rows,
                common.cols,
                common.frames,
                common.fps,
            )?,
            common.out,
        ),
        SceneCommand::Spot {
            common,
            path,
            radius,
            from,
            to,
        } => {
            let center = (
                (common.rows as f64 - 1.0) / 2.0,
                (common.cols as f64 - 1.0) / 2.0,
            );
            let path = match path {
                PathKind::Heart => synth::SpotPath::Heart {
                    center,
                    // The curve spans 34 x 29 units; fit it with margin.
                    scale: (common.rows.min(common.cols) as f64 - 4.0 * radius) / 40.0,
                },
                PathKind::Circle => synth::SpotPath::Circle {
                    center,
                    radius: 0.35 * common.rows.min(common.cols) as f64,
                    revolutions: 1.0,
                    start_angle: 0.0,
                },
                PathKind::Line => {
                    let pt = |v: Option<Vec<f64>>, name: &str| -> Result<(f64, f64)> {
                        let v = v.ok_or_else(|| anyhow!("line path needs --{name} row,col"))?;
                        Ok((v[0], v[1]))
                    };
                    synth::SpotPath::Line {
                        from: pt(from, "from")?,
                        to: pt(to, "to")?,
                    }
                }
            };
            (
                synth::moving_spot(
                    &path,
                    radius,
                    common.rows,
                    common.cols,
                    common.frames,
                    common.fps,
                )?,
                common.out,
            )
        }
        SceneCommand::Flash {
            common,
            labels,
            dwell,
        } => {
            let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
            let glyphs = synth::letter_glyphs(&labels, common.rows, common.cols)?;
            (
                synth::character_flash(&glyphs, dwell, common.fps)?,
                common.out,
            )
        }
        SceneCommand::Texture {
            common,
            cycles,
            speed,
        } => (
            synth::translating_block(
                cycles,
                speed,
                common.rows,
                common.cols,
                common.frames,
                common.fps,
            )?,
            common.out,
        ),
    };
    io::write_video_cube(&out, &cube).with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}

fn parse_ce(spec: &str) -> Result<(usize, usize)> {
    let (p, q) = spec
        .split_once(['x', 'X'])
        .ok_or_else(|| anyhow!("--ce expects PxQ, got {spec:?}"))?;
    Ok((p.trim().parse()?, q.trim().parse()?))
}

fn parse_kernel(spec: &str, exposure: f64) -> Result<KernelSpec> {
    let (name, params) = spec.split_once(':').unwrap_or((spec, ""));
    let coefficient_count = |params: &str| -> Result<usize> {
        params
            .strip_prefix("h=")
            .ok_or_else(|| anyhow!("{name} kernel expects h=<count>, got {params:?}"))?
            .parse()
            .context("bad coefficient count")
    };
    Ok(match name {
        "compression" => make_compression_kernel(exposure, coefficient_count(params)?)?,
        "background-subtract" => {
            make_background_subtract_kernel(exposure, coefficient_count(params)?)?
        }
        "periodic" => {
            // periodic:f=<Hz>,harmonics=<k1>,<k2>,...
            let (f_part, harmonics_part) = params
                .split_once(",harmonics=")
                .ok_or_else(|| anyhow!("periodic kernel expects f=<Hz>,harmonics=<list>"))?;
            let fundamental: f64 = f_part
                .strip_prefix("f=")
                .ok_or_else(|| anyhow!("periodic kernel expects f=<Hz> first"))?
                .parse()
                .context("bad fundamental")?;
            let harmonics: Vec<u32> = harmonics_part
                .split(',')
                .map(|v| v.trim().parse())
                .collect::<std::result::Result<_, _>>()
                .context("bad harmonic list")?;
            make_periodic_kernel(fundamental, &harmonics, exposure)?
        }
        "tracking" => {
            if !params.is_empty() {
                bail!("tracking kernel takes no parameters");
            }
            make_tracking_kernel(exposure)?
        }
        other => bail!("unknown kernel kind {other:?}"),
    })
}

fn parse_noise(spec: &str, seed: u64) -> Result<NoiseConfig> {
    let mut config = NoiseConfig {
        photon_budget: None,
        read_noise_sigma: 0.0,
        adc_bits: None,
        rng_seed: seed,
    };
    for part in spec.split(',').filter(|s| !s.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("noise parameter {part:?} is not key=value"))?;
        match key {
            "photon" => config.photon_budget = Some(value.parse()?),
            "read" => config.read_noise_sigma = value.parse()?,
            "adc" => config.adc_bits = Some(value.parse()?),
            other => bail!("unknown noise parameter {other:?}"),
        }
    }
    Ok(config)
}

fn encode_from_options(video: &VideoCube, options: &EncodeOptions) -> Result<CodedExposure> {
    let exposure = options.exposure.unwrap_or_else(|| video.duration_s());
    let kernel = match (&options.kernel, &options.frequencies) {
        (Some(spec), None) => parse_kernel(spec, exposure)?,
        (None, Some(freqs)) => extraction_kernel(exposure, freqs.clone())?,
        (None, None) => bail!("encode needs --kernel or --frequencies"),
        (Some(_), Some(_)) => unreachable!("clap conflict"),
    };
    let h = kernel.frequency_count();
    let (p, q) = match &options.ce {
        Some(spec) => parse_ce(spec)?,
        None if h == 1 => (1, 1),
        None => bail!("--ce PxQ is required for kernels of more than one frequency"),
    };
    if p * q != h {
        bail!(
            "--ce {p}x{q} measures {} frequencies but the kernel holds {h}",
            p * q
        );
    }
    let mode = match options.spatial_mode {
        SpatialModeArg::Ideal => SpatialMode::Ideal,
        SpatialModeArg::Block => SpatialMode::Block,
    };
    let (rows, cols) = match mode {
        SpatialMode::Ideal => (video.rows(), video.cols()),
        SpatialMode::Block => {
            if !video.rows().is_multiple_of(2 * p) || !video.cols().is_multiple_of(2 * q) {
                bail!(
                    "block mode needs video dimensions divisible by the group extent {}x{}",
                    2 * p,
                    2 * q
                );
            }
            (video.rows() / (2 * p), video.cols() / (2 * q))
        }
    };
    let layout = CodingLayout::new(rows, cols, p, q)?;
    let pwm = match options.pwm_levels.as_str() {
        "off" => None,
        levels => Some(
            levels
                .parse::<u32>()
                .context("--pwm-levels expects a count or 'off'")?,
        ),
    };
    let noise = options
        .noise
        .as_deref()
        .map(|spec| parse_noise(spec, options.seed))
        .transpose()?;
    Ok(encode_exposure(
        video,
        &layout,
        &kernel,
        mode,
        pwm,
        noise.as_ref(),
    )?)
}

fn run_decode(args: DecodeArgs) -> Result<()> {
    let coded = io::read_coded_exposure(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let spectrum = decode_spectrum(&coded)?;
    io::write_spectrum(&args.out, &spectrum)
        .with_context(|| format!("writing {}", args.out.display()))?;
    let indexed = |prefix: &Path, k: usize| -> PathBuf {
        let mut name = prefix.file_name().unwrap_or_default().to_os_string();
        name.push(format!("_{k:02}.pgm"));
        prefix.with_file_name(name)
    };
    if let Some(prefix) = &args.amplitude_prefix {
        for k in 0..spectrum.frequency_count() {
            io::write_amplitude_pgm(indexed(prefix, k), spectrum.amplitude_image(k)?.view())?;
        }
    }
    if let Some(prefix) = &args.phase_prefix {
        for k in 0..spectrum.frequency_count() {
            io::write_phase_pgm(indexed(prefix, k), spectrum.phase_image(k)?.view())?;
        }
    }
    Ok(())
}

fn run_track(args: TrackArgs) -> Result<()> {
    let spectrum = io::read_spectrum(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let trajectory = extract_trajectory(&spectrum, args.threshold)?;
    io::write_trajectory_csv(&args.csv, &trajectory)
        .with_context(|| format!("writing {}", args.csv.display()))?;
    if let Some(path) = &args.time_map {
        io::write_time_map_ppm(path, &trajectory, spectrum.kernel().exposure_s)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn run_analyze(args: AnalyzeArgs) -> Result<()> {
    let (bw_traditional, bw_fouriercam) =
        analysis::detection_bandwidth(args.fmax, args.coefficients)?;
    let throughput = analysis::light_throughput(1.0, args.exposure, args.gain)?;
    let (vol_traditional, vol_fouriercam) =
        analysis::data_volume(args.frames, args.pixels, args.coefficients as u64)?;
    let flops = analysis::flops_comparison(args.frames, args.pixels)?;
    let reduction = analysis::resolution_tradeoff(args.coefficients)?;
    let resolution = tracking_temporal_resolution(args.exposure, args.grayscale_levels)?;

    let mut report = analysis::ComparisonReport::default();
    report.push("detection_bandwidth_traditional", bw_traditional, "Hz");
    report.push("detection_bandwidth_fouriercam", bw_fouriercam, "Hz");
    report.push("light_throughput_impulse", throughput.impulse, "L*s");
    report.push("light_throughput_fouriercam", throughput.fouriercam, "L*s");
    report.push("light_throughput_ratio", throughput.advantage_ratio(), "x");
    report.push("data_volume_traditional", vol_traditional as f64, "B");
    report.push("data_volume_fouriercam", vol_fouriercam as f64, "B");
    report.push("flops_fft", flops.fft, "FLOP");
    report.push("flops_fouriercam", flops.fouriercam, "FLOP");
    report.push("flops_saved", flops.saved, "FLOP");
    report.push("spatial_reduction_factor", reduction as f64, "px/CG");
    report.push("tracking_temporal_resolution", resolution, "s");

    match args.format {
        ReportFormat::Text => print!("{report}"),
        ReportFormat::Json => {
            let map: serde_json::Map<String, serde_json::Value> = report
                .entries
                .iter()
                .map(|e| {
                    (
                        e.name.clone(),
                        serde_json::json!({ "value": e.value, "unit": e.unit }),
                    )
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&map)?);
        }
    }
    Ok(())
}

fn run_roundtrip(args: RoundtripArgs) -> Result<()> {
    std::fs::create_dir_all(&args.out_dir)?;
    let video = io::read_video_cube(&args.video)
        .with_context(|| format!("reading {}", args.video.display()))?;
    let coded = encode_from_options(&video, &args.options)?;
    io::write_coded_exposure(args.out_dir.join("coded.fce"), &coded)?;
    let spectrum = decode_spectrum(&coded)?;
    io::write_spectrum(args.out_dir.join("spectrum.fcs"), &spectrum)?;
    let recon = reconstruct_video(&spectrum)?;
    io::write_video_cube(args.out_dir.join("recon.fcv"), &recon)?;

    // Per-frame SSIM against the input frame nearest in time. Kernels
    // without a DC bin reconstruct mean-free, so the input's per-pixel
    // temporal mean is restored before comparing.
    let has_dc = spectrum.kernel().frequencies_hz.contains(&0.0);
    let pixel_means = video
        .data()
        .mean_axis(fouriercam::ndarray::Axis(0))
        .expect("non-empty video");
    let mut lines = String::new();
    if !has_dc {
        lines.push_str("no DC bin sampled: input pixel means restored before comparison\n");
    }
    let mut mean = 0.0;
    for i in 0..recon.frames() {
        let t = i as f64 / recon.frame_rate_hz();
        let src = ((t * video.frame_rate_hz()).round() as usize).min(video.frames() - 1);
        let mut frame = recon.frame(i).to_owned();
        if !has_dc {
            frame += &pixel_means;
        }
        frame.mapv_inplace(|v| v.clamp(0.0, 1.0));
        let s = analysis::ssim(frame.view(), video.frame(src))?;
        mean += s;
        lines.push_str(&format!("frame {i} vs input {src}: ssim {s:.6}\n"));
    }
    mean /= recon.frames() as f64;
    lines.push_str(&format!("mean ssim {mean:.6}\n"));
    std::fs::write(args.out_dir.join("report.txt"), &lines)?;
    println!(
        "reconstructed {} frames at {:.3} Hz, mean ssim {mean:.6}",
        recon.frames(),
        recon.frame_rate_hz()
    );
    Ok(())
}
