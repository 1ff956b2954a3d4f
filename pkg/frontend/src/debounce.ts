/**
 * Trailing-edge debounce: the wrapped function runs once, delayMs after the
 * last call in a burst.  `cancel()` drops any pending invocation.
 */
export function debounce<T extends (...args: any[]) => void>(
  fn: T,
  delayMs: number,
): T & { cancel(): void } {
  let timerId: ReturnType<typeof setTimeout> | null = null;

  const wrapped = (...args: any[]) => {
    if (timerId !== null) clearTimeout(timerId);
    timerId = setTimeout(() => {
      timerId = null;
      fn(...args);
    }, delayMs);
  };
  wrapped.cancel = () => {
    if (timerId !== null) clearTimeout(timerId);
    timerId = null;
  };
  return wrapped as T & { cancel(): void };
}
