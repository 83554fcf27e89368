//! One producer, `workers` mappers, one ordered consumer.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::thread;

use crossbeam_channel::bounded;

/// Maps `items` through `work` on `workers` threads and hands results to
/// `sink` in input order.
///
/// At most `queue_depth` items wait between producer and workers, so at
/// most `queue_depth + workers + 1` inputs are alive at once. An error from
/// `sink` stops the producer and is returned once all threads have exited.
pub(crate) fn ordered_map<T, R, E, I, W, S>(
    items: I,
    workers: usize,
    queue_depth: usize,
    work: W,
    mut sink: S,
) -> Result<(), E>
where
    I: Iterator<Item = T> + Send,
    T: Send,
    R: Send,
    W: Fn(T) -> R + Sync,
    S: FnMut(R) -> Result<(), E>,
{
    let workers = workers.max(1);
    let (job_tx, job_rx) = bounded::<(u64, T)>(queue_depth.max(1));
    let (done_tx, done_rx) = bounded::<(u64, R)>(queue_depth.max(1) + workers);
    let stop = AtomicBool::new(false);

    thread::scope(|scope| {
        let stop = &stop;
        let work = &work;
        scope.spawn(move || {
            for (seq, item) in (0u64..).zip(items) {
                if stop.load(Ordering::Relaxed) || job_tx.send((seq, item)).is_err() {
                    break;
                }
            }
        });
        for _ in 0..workers {
            let job_rx = job_rx.clone();
            let done_tx = done_tx.clone();
            scope.spawn(move || {
                for (seq, item) in job_rx.iter() {
                    if done_tx.send((seq, work(item))).is_err() {
                        break;
                    }
                }
            });
        }
        drop(job_rx);
        drop(done_tx);

        let mut next = 0u64;
        let mut pending = BTreeMap::new();
        let outcome = 'recv: loop {
            let Ok((seq, result)) = done_rx.recv() else {
                break Ok(());
            };
            pending.insert(seq, result);
            while let Some(result) = pending.remove(&next) {
                if let Err(e) = sink(result) {
                    stop.store(true, Ordering::Relaxed);
                    break 'recv Err(e);
                }
                next += 1;
            }
        };
        // Unblocks workers still trying to deliver results.
        drop(done_rx);
        outcome
    })
}
