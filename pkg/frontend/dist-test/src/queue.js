/** Review queue state: pending items, a cursor, submission bookkeeping.
 *
 * The cursor always points at an undecided item or at end-of-queue. Every
 * mutation happens after the server confirmed the corresponding request, so
 * a failed request never corrupts local state; the cache file on the server
 * stays the single source of truth.
 */
export class ReviewQueue {
    api;
    items = [];
    cursor = 0;
    constructor(api) {
        this.api = api;
    }
    get length() {
        return this.items.length;
    }
    /** 1-based position for display; length + 1 means end-of-queue. */
    get position() {
        return this.cursor + 1;
    }
    current() {
        return this.cursor < this.items.length ? this.items[this.cursor] : null;
    }
    atEnd() {
        return this.cursor >= this.items.length;
    }
    /** Re-fetch the pending list; the server-side order is authoritative. */
    async refresh() {
        const items = await this.api.pending();
        this.items = items;
        if (this.cursor > this.items.length) {
            this.cursor = this.items.length;
        }
        if (this.cursor === this.items.length && this.items.length > 0) {
            this.cursor = this.items.length - 1;
        }
    }
    next() {
        if (this.cursor < this.items.length) {
            this.cursor += 1;
        }
    }
    previous() {
        if (this.cursor > 0) {
            this.cursor -= 1;
        }
    }
    /**
     * Submit a verdict for the current item. On acceptance the item leaves
     * the local queue and the cursor lands on the next undecided item; on a
     * 409 conflict the whole queue is re-fetched. Network failures propagate
     * untouched so the caller can offer a retry.
     */
    async submit(verdict) {
        const item = this.current();
        if (item === null) {
            return "empty";
        }
        const outcome = await this.api.submitVerdict(item, verdict);
        if (outcome === "accepted") {
            this.items.splice(this.cursor, 1);
            if (this.cursor >= this.items.length && this.cursor > 0) {
                this.cursor = this.items.length > 0 ? this.items.length - 1 : 0;
            }
        }
        else {
            await this.refresh();
        }
        return outcome;
    }
}
