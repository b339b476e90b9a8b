use clearvoice_core::*;
use proptest::prelude::*;

const MULTICHANNEL: [ChannelLayout; 3] = [
    ChannelLayout::Surround30,
    ChannelLayout::Surround51,
    ChannelLayout::Surround51Plus2,
];

fn layout_strategy() -> impl Strategy<Value = ChannelLayout> {
    prop::sample::select(MULTICHANNEL.to_vec())
}

fn clip_strategy(
    layouts: Vec<ChannelLayout>,
    max_frames: usize,
    amplitude: f64,
) -> impl Strategy<Value = AudioClip> {
    (prop::sample::select(layouts), 0..=max_frames).prop_flat_map(move |(layout, frames)| {
        prop::collection::vec(
            prop::collection::vec(-amplitude..=amplitude, frames),
            layout.channel_count(),
        )
        .prop_map(move |planes| AudioClip::new(layout, 48000, planes).unwrap())
    })
}

fn stereo_preset_for(layout: ChannelLayout, pick: usize) -> DownmixMatrix {
    let presets: Vec<Preset> = Preset::ALL
        .into_iter()
        .filter(|p| preset_matrix(*p, layout).is_ok())
        .collect();
    preset_matrix(presets[pick % presets.len()], layout).unwrap()
}

fn ulp(x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        f64::MIN_POSITIVE
    } else {
        f64::from_bits(x.to_bits() + 1) - x
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn power_of_two_scaling_is_exact(clip in clip_strategy(MULTICHANNEL.to_vec(), 200, 1.0), pick in 0usize..3, exp in -4i32..4) {
        let m = stereo_preset_for(clip.layout(), pick);
        let a = 2f64.powi(exp);
        let lhs = apply_matrix(&clip.scaled(a), &m).unwrap();
        let rhs = apply_matrix(&clip, &m).unwrap().scaled(a);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn superposition(
        layout in layout_strategy(),
        frames in 0usize..200,
        seed in any::<u64>(),
        pick in 0usize..3,
    ) {
        let gen = |s: u64| {
            let mut spec = TestSignalSpec::new(layout, 48000, frames as f64 / 48000.0);
            for (k, &ch) in layout.channels().iter().enumerate() {
                spec = spec.with(ch, Component::Noise { seed: s.wrapping_add(k as u64), amplitude: 1.0 });
            }
            generate(&spec).unwrap()
        };
        let x = gen(seed);
        let y = gen(seed ^ 0xDEAD_BEEF);
        let sum_planes = x.channels().iter().zip(y.channels())
            .map(|(a, b)| a.iter().zip(b).map(|(p, q)| p + q).collect())
            .collect();
        let sum = AudioClip::new(layout, 48000, sum_planes).unwrap();
        let m = stereo_preset_for(layout, pick);
        let lhs = apply_matrix(&sum, &m).unwrap();
        let mx = apply_matrix(&x, &m).unwrap();
        let my = apply_matrix(&y, &m).unwrap();
        // Accumulation error is bounded relative to the magnitude of the
        // summed terms, not the (possibly cancelled) result.
        let magnitude_planes = x.channels().iter().zip(y.channels())
            .map(|(a, b)| a.iter().zip(b).map(|(p, q)| p.abs() + q.abs()).collect())
            .collect();
        let magnitude = apply_matrix(&AudioClip::new(layout, 48000, magnitude_planes).unwrap(), &m).unwrap();
        for (((l, a), b), mag) in lhs.channels().iter().flatten()
            .zip(mx.channels().iter().flatten())
            .zip(my.channels().iter().flatten())
            .zip(magnitude.channels().iter().flatten())
        {
            let tol = 4.0 * ulp(*mag);
            prop_assert!((l - (a + b)).abs() <= tol, "{} vs {}", l, a + b);
        }
    }

    #[test]
    fn normalization_ceiling_and_no_clip_identity(
        clip in clip_strategy(MULTICHANNEL.to_vec(), 300, 1.0),
        pick in 0usize..3,
        target_db in -12.0f64..=0.0,
    ) {
        let m = stereo_preset_for(clip.layout(), pick);
        let policy = NormalizationPolicy::from_db(true, target_db).unwrap();
        let raw = apply_matrix(&clip, &m).unwrap();
        let (out, report) = downmix(&clip, &m, &policy).unwrap();
        let peak = peak_scan(&out).values().iter().copied().fold(0.0, f64::max);
        let target = policy.target_peak();
        prop_assert!(peak <= target + ulp(target));
        let raw_peak = peak_scan(&raw).values().iter().copied().fold(0.0, f64::max);
        if raw_peak <= target {
            prop_assert_eq!(report.normalization_scalar, 1.0);
            prop_assert_eq!(out, raw);
        } else {
            prop_assert!((peak - target).abs() <= ulp(target));
        }
        for i in 0..report.output_peak.values().len() {
            let expect = report.pre_norm_peak[i] * report.normalization_scalar;
            prop_assert!((report.output_peak[i] - expect).abs() <= ulp(expect));
        }
    }

    #[test]
    fn downmix_is_deterministic(clip in clip_strategy(MULTICHANNEL.to_vec(), 100, 2.0), pick in 0usize..3) {
        let m = stereo_preset_for(clip.layout(), pick);
        let policy = NormalizationPolicy::default();
        let (a, ra) = downmix(&clip, &m, &policy).unwrap();
        let (b, rb) = downmix(&clip, &m, &policy).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(serde_json::to_string(&ra).unwrap(), serde_json::to_string(&rb).unwrap());
    }

    #[test]
    fn center_only_dominance(frames in 1usize..500, seed in any::<u64>(), amp in 0.01f64..1.0) {
        let spec = TestSignalSpec::new(ChannelLayout::Surround51, 48000, frames as f64 / 48000.0)
            .with(Channel::C, Component::Noise { seed, amplitude: amp });
        let clip = generate(&spec).unwrap();
        prop_assume!(clip.channel(Channel::C).unwrap().iter().any(|&s| s != 0.0));
        let es = apply_matrix(&clip, &preset_matrix(Preset::EsStereo, clip.layout()).unwrap()).unwrap();
        let ebu = apply_matrix(&clip, &preset_matrix(Preset::EbuStereo, clip.layout()).unwrap()).unwrap();
        let rms = |s: &[f64]| (s.iter().map(|x| x * x).sum::<f64>() / s.len() as f64).sqrt();
        for ch in 0..2 {
            let ratio = rms(&es.channels()[ch]) / rms(&ebu.channels()[ch]);
            prop_assert!((ratio / (1.5 / 0.707) - 1.0).abs() < 1e-9, "{}", ratio);
        }
    }

    #[test]
    fn gain_covariance(clip in clip_strategy(MULTICHANNEL.to_vec(), 200, 1.0), g in 0.01f64..4.0) {
        prop_assume!(clip.frame_count() > 0);
        let a = MeterSet::measure(&clip);
        let b = MeterSet::measure(&clip.scaled(g));
        let shift = 20.0 * g.log10();
        for (x, y) in a.rms_dbfs.values().iter().zip(b.rms_dbfs.values())
            .chain(a.sample_peak_dbfs.values().iter().zip(b.sample_peak_dbfs.values()))
        {
            if x.0.is_finite() {
                prop_assert!((y.0 - x.0 - shift).abs() < 1e-9);
            } else {
                prop_assert!(y.is_silent());
            }
        }
        let (sa, sb) = (a.speech_background_ratio_db.unwrap(), b.speech_background_ratio_db.unwrap());
        if sa.0.is_finite() {
            prop_assert!((sa.0 - sb.0).abs() < 1e-9);
        } else {
            prop_assert_eq!(sa, sb);
        }
    }

    #[test]
    fn peak_dominates_rms(clip in clip_strategy(MULTICHANNEL.to_vec(), 200, 1.0)) {
        prop_assume!(clip.frame_count() > 0);
        let m = MeterSet::measure(&clip);
        for (p, r) in m.sample_peak_dbfs.values().iter().zip(m.rms_dbfs.values()) {
            prop_assert!(!p.0.is_nan() && !r.0.is_nan());
            if !p.is_silent() {
                prop_assert!(p.0 >= r.0 - 1e-12);
            }
        }
    }

    #[test]
    fn ratio_ordering_surround_background(frames in 1usize..400, s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let spec = TestSignalSpec::new(ChannelLayout::Surround51, 48000, frames as f64 / 48000.0)
            .with(Channel::C, Component::Noise { seed: s1, amplitude: 0.5 })
            .with(Channel::Ls, Component::Noise { seed: s2, amplitude: 0.7 })
            .with(Channel::Rs, Component::Noise { seed: s3, amplitude: 0.2 });
        let clip = generate(&spec).unwrap();
        let es = stem_speech_background_ratio(&clip, &preset_matrix(Preset::EsStereo, clip.layout()).unwrap()).unwrap();
        let ebu = stem_speech_background_ratio(&clip, &preset_matrix(Preset::EbuStereo, clip.layout()).unwrap()).unwrap();
        prop_assume!(es.0.is_finite() && ebu.0.is_finite());
        prop_assert!((es.0 - ebu.0 - 20.0 * 6f64.log10()).abs() < 0.1);
    }

    #[test]
    fn envelope_consistency(clip in clip_strategy(MULTICHANNEL.to_vec(), 300, 1.0), bins in 1usize..50) {
        prop_assume!(clip.frame_count() >= bins);
        let env = waveform_envelope(&clip, bins).unwrap();
        prop_assert_eq!(env.bin_count(), bins);
        let peaks = peak_scan(&clip);
        for (c, plane) in clip.channels().iter().enumerate() {
            let top = env.channel(c).iter().map(|b| b.1).fold(f64::MIN, f64::max);
            let bottom = env.channel(c).iter().map(|b| b.0).fold(f64::MAX, f64::min);
            prop_assert_eq!(top.abs().max(bottom.abs()), peaks[c]);
            if plane.iter().all(|&s| s >= 0.0) {
                prop_assert_eq!(top, peaks[c]);
            }
        }
        let full = waveform_envelope(&clip, clip.frame_count()).unwrap();
        for (c, plane) in clip.channels().iter().enumerate() {
            for (t, &s) in plane.iter().enumerate() {
                prop_assert_eq!(full.channel(c)[t], (s, s));
            }
        }
    }

    #[test]
    fn db_round_trip(db in -60.0f64..=0.0) {
        prop_assert!((gain_to_db(db_to_gain(db)) - db).abs() < 1e-12);
    }

    #[test]
    fn infer_layout_is_pure(count in 0usize..20, over in prop::option::of(prop::sample::select(ChannelLayout::ALL.to_vec()))) {
        prop_assert_eq!(infer_layout(count, over), infer_layout(count, over));
        if let Ok(layout) = infer_layout(count, over) {
            prop_assert_eq!(layout.channel_count(), count);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn float64_round_trip_bit_exact(clip in clip_strategy(ChannelLayout::ALL.to_vec(), 64, 4.0)) {
        let back = decode_wav(&encode_wav(&clip, SampleFormat::Float64).unwrap(), None).unwrap();
        prop_assert_eq!(back.format, SampleFormat::Float64);
        prop_assert_eq!(back.clip, clip);
    }

    #[test]
    fn float32_round_trip_bit_exact(clip in clip_strategy(ChannelLayout::ALL.to_vec(), 64, 4.0)) {
        // Restrict to values representable in f32.
        let planes = clip.channels().iter().map(|c| c.iter().map(|&s| f64::from(s as f32)).collect()).collect();
        let clip = AudioClip::new(clip.layout(), clip.sample_rate(), planes).unwrap();
        let back = decode_wav(&encode_wav(&clip, SampleFormat::Float32).unwrap(), None).unwrap();
        prop_assert_eq!(back.clip, clip);
    }

    #[test]
    fn integer_round_trip_within_one_lsb(
        clip in clip_strategy(ChannelLayout::ALL.to_vec(), 64, 1.0),
        format in prop::sample::select(vec![SampleFormat::Int16, SampleFormat::Int24, SampleFormat::Int32]),
    ) {
        let back = decode_wav(&encode_wav(&clip, format).unwrap(), None).unwrap();
        prop_assert_eq!(back.format, format);
        for (a, b) in clip.channels().iter().flatten().zip(back.clip.channels().iter().flatten()) {
            prop_assert!((a - b).abs() <= format.lsb(), "{} -> {}", a, b);
        }
    }

    #[test]
    fn parser_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..512)) {
        let _ = decode_wav(&bytes, None);
    }

    #[test]
    fn mutated_files_never_panic(
        clip in clip_strategy(ChannelLayout::ALL.to_vec(), 16, 1.0),
        format in prop::sample::select(SampleFormat::ALL.to_vec()),
        edits in prop::collection::vec((any::<prop::sample::Index>(), any::<u8>()), 1..8),
        cut in any::<prop::sample::Index>(),
    ) {
        let mut bytes = encode_wav(&clip, format).unwrap();
        for (at, value) in edits {
            let i = at.index(bytes.len());
            bytes[i] = value;
        }
        let keep = cut.index(bytes.len() + 1);
        let _ = decode_wav(&bytes, None);
        let _ = decode_wav(&bytes[..keep], None);
        let _ = decode_wav(&bytes[..keep], Some(ChannelLayout::Surround51));
    }
}
