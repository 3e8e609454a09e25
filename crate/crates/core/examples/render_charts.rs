//! Writes a grouped bar chart and a topic panel as standalone SVG files.
//!
//! `cargo run --example render_charts [out-dir]`

use std::error::Error;
use std::path::PathBuf;

use crisis_pulse::chart::{render_svg_bar, render_topic_panel, write_svg, BarSeries};

fn main() -> Result<(), Box<dyn Error>> {
    let dir = std::env::args().nth(1).map_or_else(std::env::temp_dir, PathBuf::from);
    std::fs::create_dir_all(&dir)?;

    let days: Vec<String> = (30..=31)
        .map(|d| format!("10-{d}"))
        .chain((1..=5).map(|d| format!("11-0{d}")))
        .collect();
    let series = [
        BarSeries::new("negative", vec![9.0, 28.0, 14.0, 8.0, 5.0, 4.0, 2.0]).with_color("#d62728"),
        BarSeries::new("neutral", vec![7.0, 25.0, 12.0, 9.0, 6.0, 3.0, 3.0]).with_color("#7f7f7f"),
        BarSeries::new("positive", vec![14.0, 23.0, 16.0, 7.0, 7.0, 5.0, 1.0]).with_color("#2ca02c"),
    ];
    let bars = dir.join("daily_example.svg");
    write_svg(&render_svg_bar(&days, &series, "Tweets per day by sentiment")?, &bars)?;

    let topics = vec![
        vec![
            ("enkaz".to_string(), 0.21),
            ("bayraklı".into(), 0.12),
            ("ses".into(), 0.08),
        ],
        vec![
            ("geçmiş".to_string(), 0.30),
            ("olsun".into(), 0.29),
            ("izmir".into(), 0.11),
        ],
        vec![
            ("yardım".to_string(), 0.18),
            ("kurtarıldı".into(), 0.09),
            ("umut".into(), 0.07),
        ],
    ];
    let panel = dir.join("topics_example.svg");
    write_svg(&render_topic_panel(&topics, "Top words per topic")?, &panel)?;

    println!("{}\n{}", bars.display(), panel.display());
    Ok(())
}
