use std::net::SocketAddr;
use std::path::PathBuf;

use anyhow::Context;
use chanda_core::meterdb::DATABASE_ENV;
use chanda_core::MetricalDatabase;
use chanda_service::{router, AppState, Config, DEFAULT_MAX_TEXT_BYTES};
use clap::Parser;

#[derive(Debug, Parser)]
#[command(name = "chanda-serve", version, about = "Serve the meter identifier over HTTP")]
struct Args {
    /// Address to listen on.
    #[arg(long, env = "CHANDA_BIND", default_value = "127.0.0.1:8080")]
    bind: SocketAddr,

    /// Meter definition file to use instead of the built-in one.
    #[arg(long, env = DATABASE_ENV)]
    db: Option<PathBuf>,

    /// Largest accepted text, in bytes.
    #[arg(long, env = "CHANDA_MAX_TEXT_BYTES", default_value_t = DEFAULT_MAX_TEXT_BYTES)]
    max_text_bytes: usize,

    /// Browser origins allowed to call the API (comma-separated).
    #[arg(long, env = "CHANDA_ALLOW_ORIGINS", value_delimiter = ',')]
    allow_origin: Vec<String>,
}

fn load(path: Option<PathBuf>) -> anyhow::Result<MetricalDatabase> {
    let Some(path) = path else {
        return Ok(MetricalDatabase::starter());
    };
    let source =
        std::fs::read_to_string(&path).with_context(|| format!("cannot read meter database {}", path.display()))?;
    MetricalDatabase::load(&source).with_context(|| format!("invalid meter database {}", path.display()))
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let args = Args::parse();
    let config = Config {
        max_text_bytes: args.max_text_bytes,
        allowed_origins: args.allow_origin,
    };
    let state = AppState::new(&config);

    let listener = tokio::net::TcpListener::bind(args.bind)
        .await
        .with_context(|| format!("cannot bind {}", args.bind))?;
    eprintln!("listening on {}", listener.local_addr()?);

    let loader = std::sync::Arc::clone(&state);
    let path = args.db;
    tokio::task::spawn_blocking(move || match load(path) {
        Ok(db) => {
            eprintln!("loaded {} meters", db.len());
            loader.set_database(db);
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    });

    axum::serve(listener, router(state, &config))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .context("server error")
}
